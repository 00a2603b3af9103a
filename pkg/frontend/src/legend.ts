// Legend model for the cluster layer, derived from the served features.

import { CLUSTER_COLORS, CLUSTER_LABELS, LEGEND_ORDER } from "./colors.js";
import type { ClusterClass, GeoJsonFeature } from "./types.js";

export interface LegendEntry {
  cluster: ClusterClass;
  label: string;
  color: string;
  count: number;
}

/**
 * All five cluster classes in fixed order (zero counts included), with
 * isolates appended only when the artifact contains any.
 */
export function lisaLegend(features: GeoJsonFeature[]): LegendEntry[] {
  const counts = new Map<string, number>();
  for (const f of features) {
    const cluster = String(f.properties["cluster"]);
    counts.set(cluster, (counts.get(cluster) ?? 0) + 1);
  }
  const entries: LegendEntry[] = LEGEND_ORDER.map((cluster) => ({
    cluster,
    label: CLUSTER_LABELS[cluster],
    color: CLUSTER_COLORS[cluster],
    count: counts.get(cluster) ?? 0,
  }));
  if ((counts.get("ISOLATE") ?? 0) > 0) {
    entries.push({
      cluster: "ISOLATE",
      label: CLUSTER_LABELS.ISOLATE,
      color: CLUSTER_COLORS.ISOLATE,
      count: counts.get("ISOLATE") ?? 0,
    });
  }
  return entries;
}
