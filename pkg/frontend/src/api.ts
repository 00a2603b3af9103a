// Typed fetchers for the artifact service; any failure aborts the whole load.

import type {
  BuildingRecord,
  FeatureCollection,
  NeighborhoodRecord,
  RegressionReport,
} from "./types.js";

export interface LoadedData {
  buildings: BuildingRecord[];
  neighborhoods: NeighborhoodRecord[];
  buildingsMap: FeatureCollection;
  neighborhoodsMap: FeatureCollection;
  lisa: FeatureCollection;
  regression: RegressionReport;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) {
      throw new Error(`${path}: HTTP ${res.status}`);
    }
    return (await res.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.getJson("/api/health");
  }

  /** Everything the two views need; no partial render on failure. */
  async loadAll(): Promise<LoadedData> {
    await this.health();
    const [buildings, neighborhoods, buildingsMap, neighborhoodsMap, lisa, regression] =
      await Promise.all([
        this.getJson<BuildingRecord[]>("/api/scatter?granularity=building"),
        this.getJson<NeighborhoodRecord[]>("/api/scatter?granularity=neighborhood"),
        this.getJson<FeatureCollection>("/api/map/buildings"),
        this.getJson<FeatureCollection>("/api/map/neighborhoods"),
        this.getJson<FeatureCollection>("/api/lisa"),
        this.getJson<RegressionReport>("/api/regression"),
      ]);
    return { buildings, neighborhoods, buildingsMap, neighborhoodsMap, lisa, regression };
  }
}
