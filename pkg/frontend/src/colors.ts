// Cluster palette fixed to the usual LISA map legend; choropleth ramp for means.

import type { ClusterClass } from "./types.js";

export const CLUSTER_COLORS: Record<ClusterClass, string> = {
  HH: "#a50f15", // dark red
  LL: "#08519c", // dark blue
  LH: "#9ecae1", // light blue
  HL: "#fcae91", // light red
  NS: "#bdbdbd", // gray
  ISOLATE: "#f0f0f0",
};

export const CLUSTER_LABELS: Record<ClusterClass, string> = {
  HH: "High-High",
  LL: "Low-Low",
  LH: "Low-High",
  HL: "High-Low",
  NS: "Not significant",
  ISOLATE: "Isolate",
};

/** Core classes in legend order; isolates appear only when present. */
export const LEGEND_ORDER: ClusterClass[] = ["HH", "LL", "LH", "HL", "NS"];

function lerp(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

const RAMP_LOW = [239, 243, 255]; // pale blue
const RAMP_HIGH = [8, 48, 107]; // deep blue

/** Sequential ramp for score choropleths; clamps outside [lo, hi]. */
export function choroplethColor(value: number, lo: number, hi: number): string {
  const t = hi > lo ? Math.min(1, Math.max(0, (value - lo) / (hi - lo))) : 0.5;
  const r = lerp(RAMP_LOW[0], RAMP_HIGH[0], t);
  const g = lerp(RAMP_LOW[1], RAMP_HIGH[1], t);
  const b = lerp(RAMP_LOW[2], RAMP_HIGH[2], t);
  return `rgb(${r},${g},${b})`;
}

export const HIGHLIGHT_STROKE = "#ffd700";
export const LOW_GROUP_COLOR = "#2166ac"; // low-rise points
export const HIGH_GROUP_COLOR = "#b2182b"; // high-rise points
