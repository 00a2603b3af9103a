// Small linear-scale helpers (enough axes for two views; no chart library).

export interface LinearScale {
  apply(v: number): number;
  invert(px: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(n: number): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    domain,
    range,
    apply: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    invert: (px) => d0 + ((px - r0) / (r1 - r0 || 1)) * span,
    ticks: (n) => niceTicks(d0, d1, n),
  };
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo)) return [0, 1];
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

export function padded(e: [number, number], fraction: number): [number, number] {
  const pad = (e[1] - e[0]) * fraction;
  return [e[0] - pad, e[1] + pad];
}

export function niceTicks(lo: number, hi: number, target: number): number[] {
  if (hi <= lo) return [lo];
  const rawStep = (hi - lo) / Math.max(1, target);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.round(v / step) * step);
  }
  return ticks;
}
