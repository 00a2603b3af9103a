// Map view: choropleth of mean scores or the cluster layer, click-to-select.

import { choroplethColor, CLUSTER_COLORS, HIGHLIGHT_STROKE } from "./colors.js";
import { featureBounds, featurePath, makeProjector } from "./geo.js";
import type { Selection } from "./state.js";
import type { ClusterClass, FeatureCollection, GeoJsonFeature } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface MapCallbacks {
  onFeatureClick(id: number): void;
}

export type ValueAccessor = (f: GeoJsonFeature) => number | null;

export class MapView {
  private svg: SVGSVGElement;
  private width: number;
  private height: number;

  constructor(container: HTMLElement, private callbacks: MapCallbacks) {
    this.width = container.clientWidth || 560;
    this.height = container.clientHeight || 420;
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("width", String(this.width));
    this.svg.setAttribute("height", String(this.height));
    container.appendChild(this.svg);
  }

  renderChoropleth(fc: FeatureCollection, idOf: (f: GeoJsonFeature) => number, value: ValueAccessor, selection: Selection): void {
    const values = fc.features.map(value).filter((v): v is number => v !== null);
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    this.render(fc, idOf, selection, (f) => {
      const v = value(f);
      return v === null ? "#eeeeee" : choroplethColor(v, lo, hi);
    });
  }

  renderLisa(fc: FeatureCollection, idOf: (f: GeoJsonFeature) => number, selection: Selection): void {
    this.render(fc, idOf, selection, (f) => {
      const cluster = String(f.properties["cluster"]) as ClusterClass;
      return CLUSTER_COLORS[cluster] ?? "#eeeeee";
    });
  }

  private render(
    fc: FeatureCollection,
    idOf: (f: GeoJsonFeature) => number,
    selection: Selection,
    fill: (f: GeoJsonFeature) => string,
  ): void {
    this.svg.innerHTML = "";
    if (!fc.features.length) return;
    const project = makeProjector(featureBounds(fc), this.width, this.height);
    const highlighted: SVGPathElement[] = [];
    for (const f of fc.features) {
      const id = idOf(f);
      const el = document.createElementNS(SVG_NS, "path");
      el.setAttribute("d", featurePath(f, project));
      el.setAttribute("fill", fill(f));
      const selected = selection.ids.has(id);
      el.setAttribute("fill-opacity", selection.ids.size === 0 || selected ? "0.9" : "0.25");
      el.setAttribute("stroke", selected ? HIGHLIGHT_STROKE : "#ffffff");
      el.setAttribute("stroke-width", selected ? "2" : "0.5");
      el.style.cursor = "pointer";
      el.addEventListener("click", () => this.callbacks.onFeatureClick(id));
      const name = f.properties["name"];
      if (name) {
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = String(name);
        el.appendChild(title);
      }
      if (selected) highlighted.push(el);
      this.svg.appendChild(el);
    }
    // keep highlighted outlines on top
    for (const el of highlighted) this.svg.appendChild(el);
  }
}
