// Scatterplot of floors vs score with fit overlays and rectangle brushing.

import { HIGH_GROUP_COLOR, HIGHLIGHT_STROKE, LOW_GROUP_COLOR } from "./colors.js";
import { linearScale, LinearScale, extent, padded } from "./scales.js";
import { BrushRect, Selection, normalizeRect } from "./state.js";
import type { RegressionVariant, ScatterRecord } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MARGIN = { top: 12, right: 16, bottom: 34, left: 46 };

export interface ScatterCallbacks {
  onBrush(rect: BrushRect): void;
}

export class ScatterView {
  private svg: SVGSVGElement;
  private width: number;
  private height: number;
  private sx: LinearScale | null = null;
  private sy: LinearScale | null = null;
  private dragStart: [number, number] | null = null;
  private pendingRect: BrushRect | null = null;

  constructor(container: HTMLElement, private callbacks: ScatterCallbacks) {
    this.width = container.clientWidth || 560;
    this.height = container.clientHeight || 420;
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("width", String(this.width));
    this.svg.setAttribute("height", String(this.height));
    container.appendChild(this.svg);
    this.svg.addEventListener("pointerdown", (e) => this.startDrag(e));
    this.svg.addEventListener("pointermove", (e) => this.moveDrag(e));
    this.svg.addEventListener("pointerup", (e) => this.endDrag(e));
  }

  private toData(e: PointerEvent): [number, number] | null {
    if (!this.sx || !this.sy) return null;
    const box = this.svg.getBoundingClientRect();
    return [this.sx.invert(e.clientX - box.left), this.sy.invert(e.clientY - box.top)];
  }

  private startDrag(e: PointerEvent): void {
    const pt = this.toData(e);
    if (!pt) return;
    this.dragStart = pt;
    this.svg.setPointerCapture(e.pointerId);
  }

  private moveDrag(e: PointerEvent): void {
    if (!this.dragStart) return;
    const pt = this.toData(e);
    if (!pt) return;
    this.pendingRect = normalizeRect(this.dragStart[0], this.dragStart[1], pt[0], pt[1]);
    this.drawBrushRect(this.pendingRect);
  }

  private endDrag(e: PointerEvent): void {
    if (!this.dragStart) return;
    const pt = this.toData(e);
    this.svg.releasePointerCapture(e.pointerId);
    if (pt) {
      const rect = normalizeRect(this.dragStart[0], this.dragStart[1], pt[0], pt[1]);
      this.callbacks.onBrush(rect);
    }
    this.dragStart = null;
    this.pendingRect = null;
  }

  private drawBrushRect(rect: BrushRect | null): void {
    const old = this.svg.querySelector(".brush-rect");
    if (old) old.remove();
    if (!rect || !this.sx || !this.sy) return;
    const el = document.createElementNS(SVG_NS, "rect");
    const x = this.sx.apply(rect.x0);
    const y = this.sy.apply(rect.y1);
    el.setAttribute("class", "brush-rect");
    el.setAttribute("x", String(Math.min(x, this.sx.apply(rect.x1))));
    el.setAttribute("y", String(y));
    el.setAttribute("width", String(Math.abs(this.sx.apply(rect.x1) - x)));
    el.setAttribute("height", String(Math.abs(this.sy.apply(rect.y0) - y)));
    el.setAttribute("fill", "rgba(255,215,0,0.15)");
    el.setAttribute("stroke", HIGHLIGHT_STROKE);
    el.setAttribute("stroke-dasharray", "4 3");
    this.svg.appendChild(el);
  }

  /** Full redraw: rendering is a function of (records, fits, selection, brush). */
  render(
    records: ScatterRecord[],
    regression: RegressionVariant | undefined,
    selection: Selection,
    brush: BrushRect | null,
  ): void {
    this.svg.innerHTML = "";
    if (!records.length) return;
    const xs = records.map((r) => r.x);
    const ys = records.map((r) => r.y);
    this.sx = linearScale(padded(extent(xs), 0.04), [MARGIN.left, this.width - MARGIN.right]);
    this.sy = linearScale(padded(extent(ys), 0.06), [this.height - MARGIN.bottom, MARGIN.top]);

    this.drawAxes();
    const threshold = regression?.split?.threshold ?? 8;
    for (const r of records) {
      const el = document.createElementNS(SVG_NS, "circle");
      el.setAttribute("cx", this.sx.apply(r.x).toFixed(1));
      el.setAttribute("cy", this.sy.apply(r.y).toFixed(1));
      const selected = selection.ids.has(r.id);
      el.setAttribute("r", selected ? "3.5" : "2");
      el.setAttribute("fill", r.x < threshold ? LOW_GROUP_COLOR : HIGH_GROUP_COLOR);
      el.setAttribute("fill-opacity", selection.ids.size === 0 || selected ? "0.75" : "0.15");
      if (selected) {
        el.setAttribute("stroke", HIGHLIGHT_STROKE);
        el.setAttribute("stroke-width", "1.2");
      }
      if (r.label) {
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = r.label;
        el.appendChild(title);
      }
      this.svg.appendChild(el);
    }
    if (regression) this.drawFits(regression);
    this.drawBrushRect(brush);
  }

  private line(x0: number, y0: number, x1: number, y1: number, stroke: string, dash?: string): void {
    if (!this.sx || !this.sy) return;
    const el = document.createElementNS(SVG_NS, "line");
    el.setAttribute("x1", String(this.sx.apply(x0)));
    el.setAttribute("y1", String(this.sy.apply(y0)));
    el.setAttribute("x2", String(this.sx.apply(x1)));
    el.setAttribute("y2", String(this.sy.apply(y1)));
    el.setAttribute("stroke", stroke);
    el.setAttribute("stroke-width", "1.5");
    if (dash) el.setAttribute("stroke-dasharray", dash);
    this.svg.appendChild(el);
  }

  private drawFits(reg: RegressionVariant): void {
    if (!this.sx || !this.sy) return;
    const [lo, hi] = this.sx.domain;
    const f = reg.overall;
    this.line(lo, f.intercept + f.slope * lo, hi, f.intercept + f.slope * hi, "#555", "6 4");
    if (reg.split) {
      const t = reg.split.threshold;
      const l = reg.split.low;
      const h = reg.split.high;
      this.line(lo, l.intercept + l.slope * lo, t, l.intercept + l.slope * t, LOW_GROUP_COLOR);
      this.line(t, h.intercept + h.slope * t, hi, h.intercept + h.slope * hi, HIGH_GROUP_COLOR);
    }
    const curve = reg.lowess;
    if (curve.x.length > 1) {
      const d = curve.x
        .map((x, i) => `${i === 0 ? "M" : "L"}${this.sx!.apply(x).toFixed(1)},${this.sy!.apply(curve.y[i]).toFixed(1)}`)
        .join("");
      const el = document.createElementNS(SVG_NS, "path");
      el.setAttribute("d", d);
      el.setAttribute("fill", "none");
      el.setAttribute("stroke", "#e6550d");
      el.setAttribute("stroke-width", "2");
      this.svg.appendChild(el);
    }
  }

  private drawAxes(): void {
    if (!this.sx || !this.sy) return;
    const axis = document.createElementNS(SVG_NS, "g");
    axis.setAttribute("class", "axes");
    const x0 = MARGIN.left;
    const x1 = this.width - MARGIN.right;
    const y0 = this.height - MARGIN.bottom;
    for (const t of this.sx.ticks(8)) {
      const px = this.sx.apply(t);
      axis.appendChild(this.tickLine(px, y0, px, y0 + 4));
      axis.appendChild(this.tickText(px, y0 + 16, String(Math.round(t * 100) / 100), "middle"));
    }
    for (const t of this.sy.ticks(6)) {
      const py = this.sy.apply(t);
      axis.appendChild(this.tickLine(x0 - 4, py, x0, py));
      axis.appendChild(this.tickText(x0 - 7, py + 3, String(Math.round(t * 100) / 100), "end"));
    }
    axis.appendChild(this.tickLine(x0, y0, x1, y0));
    axis.appendChild(this.tickLine(x0, MARGIN.top, x0, y0));
    axis.appendChild(this.tickText((x0 + x1) / 2, this.height - 6, "floors", "middle"));
    this.svg.appendChild(axis);
  }

  private tickLine(x1: number, y1: number, x2: number, y2: number): SVGLineElement {
    const el = document.createElementNS(SVG_NS, "line");
    el.setAttribute("x1", String(x1));
    el.setAttribute("y1", String(y1));
    el.setAttribute("x2", String(x2));
    el.setAttribute("y2", String(y2));
    el.setAttribute("stroke", "#888");
    return el;
  }

  private tickText(x: number, y: number, text: string, anchor: string): SVGTextElement {
    const el = document.createElementNS(SVG_NS, "text");
    el.setAttribute("x", String(x));
    el.setAttribute("y", String(y));
    el.setAttribute("text-anchor", anchor);
    el.setAttribute("font-size", "10");
    el.setAttribute("fill", "#444");
    el.textContent = text;
    return el;
  }
}
