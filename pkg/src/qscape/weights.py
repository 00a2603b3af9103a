"""Queen contiguity weights from polygon layers, plus row standardization.

Two polygons are queen neighbors when any pair of their boundary vertices
lies within ``snap_tol`` of each other (Chebyshev metric; a shared point
suffices, no shared edge required).  Detection buckets snapped vertices on
a ``snap_tol`` grid and verifies candidates from adjacent buckets, so the
result is exactly "some vertex pair within tol" — the same predicate the
brute-force oracle in the tests evaluates pairwise.  ``snap_tol = 0``
demands bit-equal coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .geometry import MultiPolygon, Polygon

DEFAULT_SNAP_TOL = 1e-6  # meters; absorbs float jitter from the Voronoi step


class WeightsError(ValueError):
    pass


@dataclass
class SpatialWeights:
    """Sparse neighbor structure; neighbor lists sorted ascending."""

    n: int
    neighbors: list[np.ndarray]
    weights: list[np.ndarray]
    standardized: bool = False

    def cardinalities(self) -> np.ndarray:
        return np.asarray([len(nb) for nb in self.neighbors], dtype=np.int64)

    def row_sums(self) -> np.ndarray:
        return np.asarray([float(w.sum()) if len(w) else 0.0 for w in self.weights])

    def isolates(self) -> list[int]:
        return [i for i, nb in enumerate(self.neighbors) if len(nb) == 0]

    def to_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum([len(nb) for nb in self.neighbors], out=indptr[1:])
        if indptr[-1]:
            indices = np.concatenate(self.neighbors).astype(np.int64)
            wvals = np.concatenate(self.weights).astype(np.float64)
        else:
            indices = np.empty(0, dtype=np.int64)
            wvals = np.empty(0, dtype=np.float64)
        return indptr, indices, wvals


def _check_symmetric(neighbors: list[np.ndarray]) -> None:
    pairs = {(i, int(j)) for i, nb in enumerate(neighbors) for j in nb}
    for i, j in pairs:
        if i == j:
            raise WeightsError(f"observation {i} listed as its own neighbor")
        if (j, i) not in pairs:
            raise WeightsError(f"asymmetric neighbor relation: {i} -> {j} only")


def _geometry_vertices(geom: Polygon | MultiPolygon) -> np.ndarray:
    rings = geom.rings()
    return np.concatenate([r[:-1] for r in rings], axis=0)


def queen_contiguity(
    geoms: list[Polygon | MultiPolygon],
    snap_tol: float = DEFAULT_SNAP_TOL,
) -> SpatialWeights:
    """Order-one queen contiguity with binary weights."""
    n = len(geoms)
    if n < 2:
        raise WeightsError("queen contiguity needs at least 2 polygons")
    if snap_tol < 0:
        raise WeightsError("snap_tol must be >= 0")

    adjacency: set[tuple[int, int]] = set()
    if snap_tol == 0.0:
        exact: dict[tuple[float, float], list[int]] = {}
        for g, geom in enumerate(geoms):
            for x, y in np.unique(_geometry_vertices(geom), axis=0):
                exact.setdefault((float(x), float(y)), []).append(g)
        for owners in exact.values():
            for a, b in combinations(sorted(set(owners)), 2):
                adjacency.add((a, b))
    else:
        buckets: dict[tuple[int, int], list[tuple[float, float, int]]] = {}
        for g, geom in enumerate(geoms):
            for x, y in np.unique(_geometry_vertices(geom), axis=0):
                key = (math.floor(x / snap_tol), math.floor(y / snap_tol))
                buckets.setdefault(key, []).append((float(x), float(y), g))
        offsets = ((0, 0), (1, 0), (0, 1), (1, 1), (1, -1))
        for (ix, iy), entries in buckets.items():
            for dx, dy in offsets:
                other = entries if (dx, dy) == (0, 0) else buckets.get((ix + dx, iy + dy))
                if other is None:
                    continue
                if (dx, dy) == (0, 0):
                    candidates = combinations(entries, 2)
                else:
                    candidates = ((u, v) for u in entries for v in other)
                for (x1, y1, g1), (x2, y2, g2) in candidates:
                    if g1 == g2:
                        continue
                    if abs(x1 - x2) <= snap_tol and abs(y1 - y2) <= snap_tol:
                        adjacency.add((min(g1, g2), max(g1, g2)))

    neighbor_sets: list[set[int]] = [set() for _ in range(n)]
    for a, b in adjacency:
        neighbor_sets[a].add(b)
        neighbor_sets[b].add(a)
    neighbors = [np.asarray(sorted(s), dtype=np.int64) for s in neighbor_sets]
    wvals = [np.ones(len(nb), dtype=np.float64) for nb in neighbors]
    _check_symmetric(neighbors)
    return SpatialWeights(n=n, neighbors=neighbors, weights=wvals, standardized=False)


def row_standardize(w: SpatialWeights) -> SpatialWeights:
    """Scale each non-empty row to sum to one; neighbor sets unchanged."""
    if w.standardized:
        raise WeightsError("weights are already row-standardized")
    new_weights = []
    for row in w.weights:
        if len(row) == 0:
            new_weights.append(row.copy())
        else:
            new_weights.append(row / row.sum())
    return SpatialWeights(
        n=w.n,
        neighbors=[nb.copy() for nb in w.neighbors],
        weights=new_weights,
        standardized=True,
    )


def write_gal(w: SpatialWeights, path) -> None:
    """GAL-style adjacency text: header n, then 'id count' + neighbor ids."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{w.n}\n")
        for i in range(w.n):
            nb = w.neighbors[i]
            fh.write(f"{i} {len(nb)}\n")
            fh.write(" ".join(str(int(j)) for j in nb) + "\n")


def read_gal(path) -> SpatialWeights:
    with open(path, encoding="utf-8") as fh:
        tokens = fh.read().split("\n")
    try:
        n = int(tokens[0])
        neighbors: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * n
        line = 1
        for _ in range(n):
            obs, count = (int(v) for v in tokens[line].split())
            ids = [int(v) for v in tokens[line + 1].split()] if count else []
            if len(ids) != count:
                raise ValueError(f"observation {obs}: expected {count} neighbor ids")
            neighbors[obs] = np.asarray(sorted(ids), dtype=np.int64)
            line += 2
    except (ValueError, IndexError) as exc:
        raise WeightsError(f"{path}: malformed GAL file: {exc}") from exc
    _check_symmetric(neighbors)
    wvals = [np.ones(len(nb), dtype=np.float64) for nb in neighbors]
    return SpatialWeights(n=n, neighbors=neighbors, weights=wvals, standardized=False)
