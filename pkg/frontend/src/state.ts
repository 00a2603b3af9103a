// Selection and view state: the single source of truth both views render from.

import type { ScatterRecord } from "./types.js";

export type SelectionSource = "scatter" | "map";

export interface Selection {
  ids: Set<number>;
  source: SelectionSource | null;
}

export interface BrushRect {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export type Granularity = "building" | "neighborhood";
export type MapLayer = "choropleth" | "lisa";

export interface ViewState {
  granularity: Granularity;
  layer: MapLayer;
  brush: BrushRect | null;
}

export function emptySelection(): Selection {
  return { ids: new Set(), source: null };
}

/** Well-ordered rectangle from two drag corners (min <= max per axis). */
export function normalizeRect(ax: number, ay: number, bx: number, by: number): BrushRect {
  return {
    x0: Math.min(ax, bx),
    x1: Math.max(ax, bx),
    y0: Math.min(ay, by),
    y1: Math.max(ay, by),
  };
}

export function pointsInRect(records: ScatterRecord[], rect: BrushRect): number[] {
  return records
    .filter((r) => r.x >= rect.x0 && r.x <= rect.x1 && r.y >= rect.y0 && r.y <= rect.y1)
    .map((r) => r.id);
}

/** Brush in scatter data coordinates; empty rect gives an empty selection. */
export function selectFromScatter(records: ScatterRecord[], rect: BrushRect): Selection {
  return { ids: new Set(pointsInRect(records, rect)), source: "scatter" };
}

/** Map-side selection; ids outside the loaded layer are dropped with a warning. */
export function selectFromMap(ids: Iterable<number>, knownIds: Set<number>): Selection {
  const kept = new Set<number>();
  for (const id of ids) {
    if (knownIds.has(id)) {
      kept.add(id);
    } else {
      console.warn(`selection ignores unknown feature id ${id}`);
    }
  }
  return { ids: kept, source: "map" };
}

export function toggleId(selection: Selection, id: number, knownIds: Set<number>): Selection {
  const ids = new Set(selection.ids);
  if (ids.has(id)) {
    ids.delete(id);
  } else if (knownIds.has(id)) {
    ids.add(id);
  } else {
    console.warn(`selection ignores unknown feature id ${id}`);
  }
  return { ids, source: "map" };
}

/** The ids a view highlights: always exactly the selection (linking is bijective). */
export function highlightedIds(selection: Selection): Set<number> {
  return selection.ids;
}

export function sameIdSet(a: Set<number>, b: Set<number>): boolean {
  if (a.size !== b.size) return false;
  for (const v of a) if (!b.has(v)) return false;
  return true;
}
