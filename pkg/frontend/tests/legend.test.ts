import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { CLUSTER_COLORS } from "../src/colors.js";
import { lisaLegend } from "../src/legend.js";
import type { FeatureCollection } from "../src/types.js";

const lisa: FeatureCollection = JSON.parse(
  readFileSync(new URL("./fixtures/lisa.geojson", import.meta.url), "utf-8"),
);

describe("cluster legend against the fixture artifact set", () => {
  it("renders all five classes with the standard color mapping", () => {
    // [SECONDARY] acceptance: HH dark red, LL dark blue, LH light blue,
    // HL light red, NS gray
    const entries = lisaLegend(lisa.features);
    const core = entries.filter((e) => e.cluster !== "ISOLATE");
    expect(core.map((e) => e.cluster)).toEqual(["HH", "LL", "LH", "HL", "NS"]);
    const byClass = Object.fromEntries(core.map((e) => [e.cluster, e.color]));
    expect(byClass.HH).toBe("#a50f15");
    expect(byClass.LL).toBe("#08519c");
    expect(byClass.LH).toBe("#9ecae1");
    expect(byClass.HL).toBe("#fcae91");
    expect(byClass.NS).toBe("#bdbdbd");
  });

  it("counts match the artifact", () => {
    const entries = lisaLegend(lisa.features);
    const counts = new Map<string, number>();
    for (const f of lisa.features) {
      const c = String(f.properties["cluster"]);
      counts.set(c, (counts.get(c) ?? 0) + 1);
    }
    let total = 0;
    for (const e of entries) {
      expect(e.count).toBe(counts.get(e.cluster) ?? 0);
      total += e.count;
    }
    expect(total).toBe(lisa.features.length);
    // the fixture run produced every class
    for (const e of entries) {
      expect(e.count).toBeGreaterThan(0);
    }
  });

  it("colors agree with the map layer's fill mapping", () => {
    for (const e of lisaLegend(lisa.features)) {
      expect(e.color).toBe(CLUSTER_COLORS[e.cluster]);
    }
  });
});
