// Wiring: one selection drives both views; brushing and clicking stay linked.

import { ApiClient, LoadedData } from "./api.js";
import { lisaLegend } from "./legend.js";
import { MapView } from "./mapview.js";
import { ScatterView } from "./scatter.js";
import {
  BrushRect,
  Granularity,
  MapLayer,
  Selection,
  ViewState,
  emptySelection,
  selectFromScatter,
  toggleId,
} from "./state.js";
import {
  GeoJsonFeature,
  RegressionVariant,
  ScatterRecord,
  buildingToScatter,
  neighborhoodToScatter,
} from "./types.js";

function featureId(f: GeoJsonFeature): number {
  const props = f.properties;
  return Number(props["id"] ?? props["site_id"]);
}

export class App {
  private data: LoadedData | null = null;
  private selection: Selection = emptySelection();
  private view: ViewState = { granularity: "neighborhood", layer: "choropleth", brush: null };
  private scatter: ScatterView;
  private map: MapView;

  constructor(private root: Document, api: ApiClient) {
    this.scatter = new ScatterView(this.el("scatter"), { onBrush: (r) => this.brush(r) });
    this.map = new MapView(this.el("map"), { onFeatureClick: (id) => this.clickFeature(id) });
    this.el("granularity").addEventListener("change", (e) => {
      this.setGranularity((e.target as HTMLSelectElement).value as Granularity);
    });
    this.el("layer").addEventListener("change", (e) => {
      this.setLayer((e.target as HTMLSelectElement).value as MapLayer);
    });
    this.el("clear").addEventListener("click", () => {
      this.selection = emptySelection();
      this.view.brush = null;
      this.renderAll();
    });
    api
      .loadAll()
      .then((data) => {
        this.data = data;
        this.renderAll();
      })
      .catch((err) => {
        const banner = this.el("error");
        banner.textContent = `failed to load artifacts: ${err}`;
        banner.style.display = "block";
      });
  }

  private el(id: string): HTMLElement {
    const node = this.root.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  }

  private records(): ScatterRecord[] {
    if (!this.data) return [];
    return this.view.granularity === "building"
      ? buildingToScatter(this.data.buildings)
      : neighborhoodToScatter(this.data.neighborhoods);
  }

  private regression(): RegressionVariant | undefined {
    if (!this.data) return undefined;
    return this.view.granularity === "building"
      ? this.data.regression.building
      : this.data.regression.neighborhood;
  }

  private knownIds(): Set<number> {
    return new Set(this.records().map((r) => r.id));
  }

  private setGranularity(granularity: Granularity): void {
    this.view.granularity = granularity;
    // the cluster layer lives on the neighborhood tessellation only
    if (granularity === "building" && this.view.layer === "lisa") {
      this.view.layer = "choropleth";
      (this.el("layer") as HTMLSelectElement).value = "choropleth";
    }
    this.selection = emptySelection();
    this.view.brush = null;
    this.renderAll();
  }

  private setLayer(layer: MapLayer): void {
    this.view.layer = layer;
    if (layer === "lisa" && this.view.granularity === "building") {
      this.view.granularity = "neighborhood";
      (this.el("granularity") as HTMLSelectElement).value = "neighborhood";
      this.selection = emptySelection();
      this.view.brush = null;
    }
    this.renderAll();
  }

  private brush(rect: BrushRect): void {
    this.view.brush = rect;
    this.selection = selectFromScatter(this.records(), rect);
    this.renderAll();
  }

  private clickFeature(id: number): void {
    this.selection = toggleId(this.selection, id, this.knownIds());
    this.renderAll();
  }

  private renderAll(): void {
    if (!this.data) return;
    this.scatter.render(this.records(), this.regression(), this.selection, this.view.brush);
    const legendEl = this.el("legend");
    if (this.view.layer === "lisa") {
      this.map.renderLisa(this.data.lisa, featureId, this.selection);
      legendEl.innerHTML = lisaLegend(this.data.lisa.features)
        .map(
          (e) =>
            `<span class="key"><i style="background:${e.color}"></i>${e.label} (${e.count})</span>`,
        )
        .join(" ");
    } else if (this.view.granularity === "building") {
      this.map.renderChoropleth(
        this.data.buildingsMap,
        featureId,
        (f) => (f.properties["qscore_interp"] as number | null) ?? null,
        this.selection,
      );
      legendEl.textContent = "building choropleth: darker = higher interpolated score";
    } else {
      this.map.renderChoropleth(
        this.data.neighborhoodsMap,
        featureId,
        (f) => (f.properties["mean_qscore"] as number | null) ?? null,
        this.selection,
      );
      legendEl.textContent = "neighborhood choropleth: darker = higher mean score";
    }
    this.el("status").textContent = this.selection.ids.size
      ? `${this.selection.ids.size} selected (${this.selection.source})`
      : "drag on the scatterplot or click map features to link selections";
  }
}

export function mount(doc: Document, baseUrl = ""): App {
  return new App(doc, new ApiClient(baseUrl));
}
