// GeoJSON to SVG paths through a small equirectangular screen projection.

import type { FeatureCollection, GeoJsonFeature } from "./types.js";

export interface Bounds {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}

type Ring = number[][];

function eachRing(feature: GeoJsonFeature, fn: (ring: Ring) => void): void {
  const geom = feature.geometry;
  if (geom.type === "Polygon") {
    for (const ring of geom.coordinates as Ring[]) fn(ring);
  } else {
    for (const poly of geom.coordinates as Ring[][]) for (const ring of poly) fn(ring);
  }
}

export function featureBounds(fc: FeatureCollection): Bounds {
  let minLon = Infinity;
  let minLat = Infinity;
  let maxLon = -Infinity;
  let maxLat = -Infinity;
  for (const f of fc.features) {
    eachRing(f, (ring) => {
      for (const [lon, lat] of ring) {
        if (lon < minLon) minLon = lon;
        if (lon > maxLon) maxLon = lon;
        if (lat < minLat) minLat = lat;
        if (lat > maxLat) maxLat = lat;
      }
    });
  }
  return { minLon, minLat, maxLon, maxLat };
}

export type Projector = (lon: number, lat: number) => [number, number];

/**
 * Fit the bounds into width x height with margin, preserving the local
 * aspect ratio (longitudes compressed by cos of the central latitude),
 * y growing downward.
 */
export function makeProjector(bounds: Bounds, width: number, height: number, margin = 10): Projector {
  const latMid = (bounds.minLat + bounds.maxLat) / 2;
  const kx = Math.cos((latMid * Math.PI) / 180);
  const spanX = (bounds.maxLon - bounds.minLon) * kx || 1e-9;
  const spanY = bounds.maxLat - bounds.minLat || 1e-9;
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const offsetX = (width - spanX * scale) / 2;
  const offsetY = (height - spanY * scale) / 2;
  return (lon, lat) => [
    offsetX + (lon - bounds.minLon) * kx * scale,
    height - offsetY - (lat - bounds.minLat) * scale,
  ];
}

export function featurePath(feature: GeoJsonFeature, project: Projector): string {
  const parts: string[] = [];
  eachRing(feature, (ring) => {
    const cmds = ring.map(([lon, lat], i) => {
      const [x, y] = project(lon, lat);
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
    });
    parts.push(cmds.join("") + "Z");
  });
  return parts.join("");
}
