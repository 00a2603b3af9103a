// Payload shapes of the artifact service API.

export interface BuildingRecord {
  id: number;
  floors: number;
  qscore_interp: number;
}

export interface NeighborhoodRecord {
  id: number;
  name: string;
  mean_floors: number;
  mean_qscore: number;
}

/** Unified scatter datum: x = floors, y = score. */
export interface ScatterRecord {
  id: number;
  x: number;
  y: number;
  label?: string;
}

export type ClusterClass = "HH" | "LL" | "LH" | "HL" | "NS" | "ISOLATE";

export interface GeoJsonGeometry {
  type: "Polygon" | "MultiPolygon";
  coordinates: number[][][] | number[][][][];
}

export interface GeoJsonFeature {
  type: "Feature";
  geometry: GeoJsonGeometry;
  properties: Record<string, unknown>;
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: GeoJsonFeature[];
}

export interface FitSummary {
  slope: number;
  intercept: number;
  r2: number;
  n: number;
}

export interface LowessCurve {
  frac: number;
  iterations: number;
  x: number[];
  y: number[];
}

export interface RegressionVariant {
  n: number;
  overall: FitSummary;
  split?: {
    threshold: number;
    low_share: number;
    low: FitSummary;
    high: FitSummary;
  };
  lowess: LowessCurve;
}

export interface RegressionReport {
  building: RegressionVariant;
  neighborhood?: RegressionVariant;
}

export function buildingToScatter(rows: BuildingRecord[]): ScatterRecord[] {
  return rows.map((r) => ({ id: r.id, x: r.floors, y: r.qscore_interp }));
}

export function neighborhoodToScatter(rows: NeighborhoodRecord[]): ScatterRecord[] {
  return rows.map((r) => ({ id: r.id, x: r.mean_floors, y: r.mean_qscore, label: r.name }));
}
