"""Planar computational geometry: centroids, containment, bounded Voronoi.

Rings are (V, 2) float arrays whose first and last vertex coincide.
Everything here is a pure function over immutable inputs, so concurrent
callers can share geometry freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels


class GeometryError(ValueError):
    """Degenerate or invalid geometry."""


@dataclass
class Polygon:
    """Closed exterior ring plus optional hole rings."""

    exterior: np.ndarray
    holes: list[np.ndarray] = field(default_factory=list)

    def rings(self) -> list[np.ndarray]:
        return [self.exterior, *self.holes]


@dataclass
class MultiPolygon:
    parts: list[Polygon]

    def rings(self) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for part in self.parts:
            out.extend(part.rings())
        return out


@dataclass
class VoronoiCell:
    site_id: int
    geometry: Polygon


Geometry = Polygon | MultiPolygon


def as_ring(coords) -> np.ndarray:
    ring = np.asarray(coords, dtype=np.float64)
    if ring.ndim != 2 or ring.shape[1] != 2:
        raise GeometryError("a ring must be a (V, 2) coordinate array")
    return ring


def validate_ring(ring: np.ndarray, check_simple: bool = True) -> None:
    """Closed, at least 4 vertices, nonzero area, optionally non-self-intersecting."""
    if ring.shape[0] < 4:
        raise GeometryError("ring needs at least 4 vertices including closure")
    if ring[0, 0] != ring[-1, 0] or ring[0, 1] != ring[-1, 1]:
        raise GeometryError("ring is not closed (first vertex != last)")
    if check_simple and _self_intersects(ring):
        raise GeometryError("ring is self-intersecting")
    if ring_area(ring) == 0.0:
        raise GeometryError("ring has zero area")


def _self_intersects(ring: np.ndarray) -> bool:
    """Proper-crossing test over all non-adjacent edge pairs, vectorized."""
    p = ring[:-1]
    q = ring[1:]
    e = p.shape[0]
    if e < 4:
        return False

    def orient(ox, oy, ax, ay, bx, by):
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)

    px, py = p[:, 0][:, None], p[:, 1][:, None]
    qx, qy = q[:, 0][:, None], q[:, 1][:, None]
    rx, ry = p[:, 0][None, :], p[:, 1][None, :]
    sx, sy = q[:, 0][None, :], q[:, 1][None, :]
    o1 = orient(px, py, qx, qy, rx, ry)
    o2 = orient(px, py, qx, qy, sx, sy)
    o3 = orient(rx, ry, sx, sy, px, py)
    o4 = orient(rx, ry, sx, sy, qx, qy)
    crossing = (
        ((o1 > 0) != (o2 > 0))
        & ((o3 > 0) != (o4 > 0))
        & (o1 != 0)
        & (o2 != 0)
        & (o3 != 0)
        & (o4 != 0)
    )
    idx = np.arange(e)
    adjacent = np.abs(idx[:, None] - idx[None, :]) <= 1
    adjacent[0, e - 1] = adjacent[e - 1, 0] = True  # adjacency through closure
    return bool(np.any(crossing & ~adjacent))


def ring_area(ring: np.ndarray) -> float:
    """Signed shoelace area (positive for counterclockwise rings).

    Computed relative to the first vertex: small rings far from the origin
    would otherwise lose the area to cancellation.
    """
    x = ring[:-1, 0] - ring[0, 0]
    y = ring[:-1, 1] - ring[0, 1]
    xn = ring[1:, 0] - ring[0, 0]
    yn = ring[1:, 1] - ring[0, 1]
    return 0.5 * float(np.sum(x * yn - xn * y))


def _ring_centroid_terms(ring: np.ndarray, ref: tuple[float, float]) -> tuple[float, float, float]:
    """(signed area, area-weighted cx, cy), shoelace in the ref-shifted frame."""
    x = ring[:-1, 0] - ref[0]
    y = ring[:-1, 1] - ref[1]
    xn = ring[1:, 0] - ref[0]
    yn = ring[1:, 1] - ref[1]
    cross = x * yn - xn * y
    a = 0.5 * float(np.sum(cross))
    cx = float(np.sum((x + xn) * cross)) / 6.0
    cy = float(np.sum((y + yn) * cross)) / 6.0
    return a, cx, cy


def area(geom: Geometry) -> float:
    """Unsigned area; holes subtract."""
    total = 0.0
    parts = geom.parts if isinstance(geom, MultiPolygon) else [geom]
    for part in parts:
        total += abs(ring_area(part.exterior))
        for hole in part.holes:
            total -= abs(ring_area(hole))
    return total


def centroid(geom: Geometry) -> tuple[float, float]:
    """Area-weighted centroid; multipolygon parts weighted by area, holes subtract."""
    sa = 0.0
    sx = 0.0
    sy = 0.0
    parts = geom.parts if isinstance(geom, MultiPolygon) else [geom]
    ref = (float(parts[0].exterior[0, 0]), float(parts[0].exterior[0, 1]))
    for part in parts:
        a, cx, cy = _ring_centroid_terms(part.exterior, ref)
        sign = 1.0 if a >= 0 else -1.0
        sa += sign * a
        sx += sign * cx
        sy += sign * cy
        for hole in part.holes:
            a, cx, cy = _ring_centroid_terms(hole, ref)
            # holes always subtract area regardless of their winding
            sign = -1.0 if a >= 0 else 1.0
            sa += sign * a
            sx += sign * cx
            sy += sign * cy
    if sa == 0.0:
        raise GeometryError("centroid of zero-area geometry is undefined")
    return sx / sa + ref[0], sy / sa + ref[1]


@dataclass
class RingSoup:
    """Packed rings of a polygon sequence, kernel-ready."""

    vx: np.ndarray
    vy: np.ndarray
    ring_ptr: np.ndarray
    poly_ring_ptr: np.ndarray
    poly_bbox: np.ndarray

    @property
    def n_polys(self) -> int:
        return self.poly_ring_ptr.shape[0] - 1


def pack_polygons(geoms: list[Geometry]) -> RingSoup:
    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    ring_ptr = [0]
    poly_ring_ptr = [0]
    bboxes = np.empty((len(geoms), 4), dtype=np.float64)
    total = 0
    for g, geom in enumerate(geoms):
        rings = geom.rings()
        minx = miny = np.inf
        maxx = maxy = -np.inf
        for ring in rings:
            xs.append(ring[:, 0])
            ys.append(ring[:, 1])
            total += ring.shape[0]
            ring_ptr.append(total)
            minx = min(minx, float(ring[:, 0].min()))
            maxx = max(maxx, float(ring[:, 0].max()))
            miny = min(miny, float(ring[:, 1].min()))
            maxy = max(maxy, float(ring[:, 1].max()))
        poly_ring_ptr.append(len(ring_ptr) - 1)
        bboxes[g] = (minx, miny, maxx, maxy)
    return RingSoup(
        vx=np.concatenate(xs) if xs else np.empty(0),
        vy=np.concatenate(ys) if ys else np.empty(0),
        ring_ptr=np.asarray(ring_ptr, dtype=np.int64),
        poly_ring_ptr=np.asarray(poly_ring_ptr, dtype=np.int64),
        poly_bbox=bboxes,
    )


def assign_to_polygons(px: np.ndarray, py: np.ndarray, soup: RingSoup) -> np.ndarray:
    """Index of the first polygon containing each point, -1 when none.

    Scanning in ascending polygon order makes boundary ties deterministic:
    the lower index wins.
    """
    out = np.empty(px.shape[0], dtype=np.int64)
    _kernels.assign_points(
        np.ascontiguousarray(px, dtype=np.float64),
        np.ascontiguousarray(py, dtype=np.float64),
        soup.vx,
        soup.vy,
        soup.ring_ptr,
        soup.poly_ring_ptr,
        soup.poly_bbox,
        out,
    )
    return out


def point_in_polygon(pt, geom: Geometry) -> bool:
    """Even-odd containment; points exactly on an edge count as inside."""
    soup = pack_polygons([geom])
    res = assign_to_polygons(
        np.asarray([pt[0]], dtype=np.float64), np.asarray([pt[1]], dtype=np.float64), soup
    )
    return bool(res[0] == 0)


def bounding_box(points: np.ndarray) -> tuple[float, float, float, float]:
    return (
        float(points[:, 0].min()),
        float(points[:, 1].min()),
        float(points[:, 0].max()),
        float(points[:, 1].max()),
    )


def expand_box(box: tuple[float, float, float, float], fraction: float) -> tuple[float, float, float, float]:
    minx, miny, maxx, maxy = box
    dx = (maxx - minx) * fraction
    dy = (maxy - miny) * fraction
    if dx == 0.0:
        dx = 1.0
    if dy == 0.0:
        dy = 1.0
    return (minx - dx, miny - dy, maxx + dx, maxy + dy)


def _clip_halfplane(ring_x, ring_y, nx, ny, c):
    """Sutherland-Hodgman clip of a closed ring against nx*x + ny*y <= c."""
    out_x: list[float] = []
    out_y: list[float] = []
    v = len(ring_x) - 1  # last vertex duplicates the first
    for i in range(v):
        x1, y1 = ring_x[i], ring_y[i]
        x2, y2 = ring_x[i + 1], ring_y[i + 1]
        f1 = nx * x1 + ny * y1 - c
        f2 = nx * x2 + ny * y2 - c
        if f1 <= 0.0:
            out_x.append(x1)
            out_y.append(y1)
            if f2 > 0.0:
                t = f1 / (f1 - f2)
                out_x.append(x1 + t * (x2 - x1))
                out_y.append(y1 + t * (y2 - y1))
        elif f2 <= 0.0:
            t = f1 / (f1 - f2)
            out_x.append(x1 + t * (x2 - x1))
            out_y.append(y1 + t * (y2 - y1))
    if out_x:
        out_x.append(out_x[0])
        out_y.append(out_y[0])
    return out_x, out_y


def voronoi(sites: np.ndarray, clip: tuple[float, float, float, float] | None = None) -> list[VoronoiCell]:
    """Voronoi cells of distinct sites, clipped to a rectangle.

    Each cell is the intersection of the clip rectangle with the bisector
    half-planes against every other site (cheap and exact at the few
    hundred sites this pipeline tessellates).  Default clip: bounding box
    of the sites expanded by 5% per side.
    """
    sites = np.asarray(sites, dtype=np.float64)
    if sites.ndim != 2 or sites.shape[1] != 2:
        raise GeometryError("sites must be an (N, 2) array")
    n = sites.shape[0]
    if n == 0:
        raise GeometryError("voronoi needs at least one site")
    seen: dict[tuple[float, float], int] = {}
    dupes = []
    for i, (x, y) in enumerate(sites):
        key = (float(x), float(y))
        if key in seen:
            dupes.append((seen[key], i))
        else:
            seen[key] = i
    if dupes:
        raise GeometryError(f"duplicate sites: {dupes}")
    if clip is None:
        clip = expand_box(bounding_box(sites), 0.05)
    minx, miny, maxx, maxy = clip
    outside = [
        i
        for i, (x, y) in enumerate(sites)
        if not (minx <= x <= maxx and miny <= y <= maxy)
    ]
    if outside:
        raise GeometryError(f"sites outside the clip rectangle: {outside}")

    # Neighbors are found in distance order so clipping can stop early:
    # once 2*d(site, other) exceeds the cell's farthest vertex, no later
    # site can cut the cell.
    cells: list[VoronoiCell] = []
    for i in range(n):
        sx, sy = sites[i]
        ring_x = [minx, maxx, maxx, minx, minx]
        ring_y = [miny, miny, maxy, maxy, miny]
        d2 = (sites[:, 0] - sx) ** 2 + (sites[:, 1] - sy) ** 2
        order = np.argsort(d2, kind="stable")
        for j in order:
            if j == i:
                continue
            vert_d2 = max(
                (vxx - sx) * (vxx - sx) + (vyy - sy) * (vyy - sy)
                for vxx, vyy in zip(ring_x, ring_y)
            )
            if d2[j] >= 4.0 * vert_d2:
                break
            ox, oy = sites[j]
            nx = ox - sx
            ny = oy - sy
            c = 0.5 * (nx * (sx + ox) + ny * (sy + oy))
            ring_x, ring_y = _clip_halfplane(ring_x, ring_y, nx, ny, c)
            if len(ring_x) < 4:
                raise GeometryError(f"voronoi cell of site {i} degenerated")
        ring = np.column_stack((np.asarray(ring_x), np.asarray(ring_y)))
        cells.append(VoronoiCell(site_id=i, geometry=Polygon(exterior=ring)))
    return cells
