import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { featureBounds, featurePath, makeProjector } from "../src/geo.js";
import { extent, linearScale, niceTicks, padded } from "../src/scales.js";
import { choroplethColor } from "../src/colors.js";
import type { FeatureCollection } from "../src/types.js";

const lisa: FeatureCollection = JSON.parse(
  readFileSync(new URL("./fixtures/lisa.geojson", import.meta.url), "utf-8"),
);

describe("geojson rendering helpers", () => {
  it("bounds cover every ring vertex", () => {
    const b = featureBounds(lisa);
    expect(b.minLon).toBeLessThan(b.maxLon);
    expect(b.minLat).toBeLessThan(b.maxLat);
    for (const f of lisa.features) {
      const coords = f.geometry.coordinates as number[][][];
      for (const ring of coords) {
        for (const [lon, lat] of ring) {
          expect(lon).toBeGreaterThanOrEqual(b.minLon);
          expect(lon).toBeLessThanOrEqual(b.maxLon);
          expect(lat).toBeGreaterThanOrEqual(b.minLat);
          expect(lat).toBeLessThanOrEqual(b.maxLat);
        }
      }
    }
  });

  it("projector keeps everything inside the viewport and flips y", () => {
    const b = featureBounds(lisa);
    const project = makeProjector(b, 600, 400, 10);
    const [xNW, yNW] = project(b.minLon, b.maxLat);
    const [xSE, ySE] = project(b.maxLon, b.minLat);
    expect(xNW).toBeLessThan(xSE);
    expect(yNW).toBeLessThan(ySE); // north renders above south
    for (const f of lisa.features) {
      const coords = f.geometry.coordinates as number[][][];
      for (const [lon, lat] of coords[0]) {
        const [x, y] = project(lon, lat);
        expect(x).toBeGreaterThanOrEqual(0);
        expect(x).toBeLessThanOrEqual(600);
        expect(y).toBeGreaterThanOrEqual(0);
        expect(y).toBeLessThanOrEqual(400);
      }
    }
  });

  it("paths are closed move-line sequences", () => {
    const b = featureBounds(lisa);
    const project = makeProjector(b, 600, 400);
    const d = featurePath(lisa.features[0], project);
    expect(d.startsWith("M")).toBe(true);
    expect(d.endsWith("Z")).toBe(true);
    expect(d).toMatch(/^M[-\d.,L]+Z$/);
  });
});

describe("scales", () => {
  it("linear scale round-trips", () => {
    const s = linearScale([0, 10], [100, 500]);
    expect(s.apply(0)).toBe(100);
    expect(s.apply(10)).toBe(500);
    expect(s.invert(s.apply(3.7))).toBeCloseTo(3.7, 12);
  });

  it("extent and padding", () => {
    expect(extent([3, -1, 7])).toEqual([-1, 7]);
    expect(extent([5, 5])).toEqual([4, 6]);
    const [lo, hi] = padded([0, 10], 0.1);
    expect(lo).toBe(-1);
    expect(hi).toBe(11);
  });

  it("ticks are within range and ordered", () => {
    const ticks = niceTicks(0, 37, 8);
    expect(ticks[0]).toBeGreaterThanOrEqual(0);
    expect(ticks[ticks.length - 1]).toBeLessThanOrEqual(37);
    for (let i = 1; i < ticks.length; i++) {
      expect(ticks[i]).toBeGreaterThan(ticks[i - 1]);
    }
  });
});

describe("choropleth ramp", () => {
  it("is monotone from low to high", () => {
    const low = choroplethColor(0, 0, 1);
    const mid = choroplethColor(0.5, 0, 1);
    const high = choroplethColor(1, 0, 1);
    expect(low).not.toBe(high);
    const channel = (c: string) => Number(c.match(/rgb\((\d+)/)![1]);
    expect(channel(low)).toBeGreaterThan(channel(mid));
    expect(channel(mid)).toBeGreaterThan(channel(high));
  });

  it("clamps outside the domain", () => {
    expect(choroplethColor(-5, 0, 1)).toBe(choroplethColor(0, 0, 1));
    expect(choroplethColor(9, 0, 1)).toBe(choroplethColor(1, 0, 1));
  });
});
