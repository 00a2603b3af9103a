"""Height-vs-score relationships: aggregation, OLS, floor split, LOWESS.

The floor split defaults to eight: the low group takes floors strictly
below the threshold, the high group the rest, each fitted independently.
LOWESS follows Cleveland: per evaluation point a tricube-weighted linear
fit over the ceil(frac * n) nearest x-neighbors, then bisquare
robustness passes scaled by six times the median absolute residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geodata import Dataset, project_geometry
from .geometry import assign_to_polygons, pack_polygons

DEFAULT_FLOOR_THRESHOLD = 8
DEFAULT_LOWESS_FRAC = 0.3
DEFAULT_LOWESS_ITERATIONS = 3


class RegressionError(ValueError):
    pass


@dataclass
class RegressionFit:
    slope: float
    intercept: float
    r2: float
    n: int


@dataclass
class SplitRegression:
    low: RegressionFit
    high: RegressionFit
    threshold: int
    low_share: float


@dataclass
class LowessCurve:
    x: np.ndarray  # distinct input x, ascending
    y: np.ndarray
    frac: float
    iterations: int


@dataclass
class AggregationStats:
    assigned: int
    spilled: int  # building centroids outside every neighborhood
    empty_neighborhood_ids: list[int]


def aggregate_neighborhoods(dataset: Dataset) -> AggregationStats:
    """Mean interpolated score (and mean floors) per containing neighborhood.

    Assignment tests each building centroid against neighborhoods in
    ascending id order, so a centroid on a shared boundary goes to the
    lower id.  Unassigned buildings are counted, not fatal; neighborhoods
    left without buildings keep ``mean_qscore = None`` and are excluded
    from the cluster stage.
    """
    buildings = dataset.buildings
    if any(b.qscore_interp is None for b in buildings):
        raise RegressionError("buildings must carry qscore_interp; run interpolation first")
    if not dataset.neighborhoods:
        raise RegressionError("no neighborhoods to aggregate into")
    order = sorted(dataset.neighborhoods, key=lambda nb: nb.id)
    soup = pack_polygons([project_geometry(nb.geometry, dataset.projection_origin) for nb in order])
    px = np.asarray([b.centroid.x for b in buildings])
    py = np.asarray([b.centroid.y for b in buildings])
    hit = assign_to_polygons(px, py, soup)
    scores = np.asarray([b.qscore_interp for b in buildings], dtype=np.float64)
    floors = np.asarray([b.floors for b in buildings], dtype=np.float64)
    nzones = len(order)
    mask = hit >= 0
    counts = np.bincount(hit[mask], minlength=nzones)
    score_sums = np.bincount(hit[mask], weights=scores[mask], minlength=nzones)
    floor_sums = np.bincount(hit[mask], weights=floors[mask], minlength=nzones)
    empty_ids = []
    for i, nb in enumerate(order):
        nb.building_count = int(counts[i])
        if counts[i] > 0:
            nb.mean_qscore = float(score_sums[i] / counts[i])
            nb.mean_floors = float(floor_sums[i] / counts[i])
        else:
            nb.mean_qscore = None
            nb.mean_floors = None
            empty_ids.append(nb.id)
    return AggregationStats(
        assigned=int(mask.sum()),
        spilled=int((~mask).sum()),
        empty_neighborhood_ids=empty_ids,
    )


def ols(x, y) -> RegressionFit:
    """Simple least squares; r2 = 1 - SS_res/SS_tot (0 when y is constant)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise RegressionError("x and y must be 1-d arrays of equal length")
    n = x.shape[0]
    if n < 2:
        raise RegressionError("regression needs at least 2 observations")
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise RegressionError("constant x: slope is undefined")
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    ss_tot = float(np.sum((y - ym) ** 2))
    if ss_tot == 0.0:
        r2 = 0.0
    else:
        ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
        r2 = 1.0 - ss_res / ss_tot
    return RegressionFit(slope=slope, intercept=intercept, r2=r2, n=n)


def split_regression(floors, scores, threshold: int = DEFAULT_FLOOR_THRESHOLD) -> SplitRegression:
    """Independent fits below and at/above the floor threshold."""
    if threshold < 2:
        raise RegressionError("threshold must be >= 2")
    floors = np.asarray(floors)
    scores = np.asarray(scores, dtype=np.float64)
    low_mask = floors < threshold
    if not low_mask.any():
        raise RegressionError("empty low group")
    if low_mask.all():
        raise RegressionError("empty high group")
    low = ols(floors[low_mask], scores[low_mask])
    high = ols(floors[~low_mask], scores[~low_mask])
    return SplitRegression(
        low=low,
        high=high,
        threshold=int(threshold),
        low_share=float(low_mask.sum() / floors.shape[0]),
    )


def lowess(
    x,
    y,
    frac: float = DEFAULT_LOWESS_FRAC,
    iterations: int = DEFAULT_LOWESS_ITERATIONS,
) -> LowessCurve:
    """Robust locally weighted regression evaluated at the distinct x values."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise RegressionError("x and y must be 1-d arrays of equal length")
    n = x.shape[0]
    if n < 3:
        raise RegressionError("lowess needs at least 3 observations")
    if not 0.0 < frac <= 1.0:
        raise RegressionError("frac must be in (0, 1]")
    if iterations < 0:
        raise RegressionError("iterations must be >= 0")
    order = np.lexsort((np.arange(n), x))  # ties keep input order
    xs = np.ascontiguousarray(x[order])
    ys = np.ascontiguousarray(y[order])
    ux, inv = np.unique(xs, return_inverse=True)
    r = min(n, math.ceil(frac * n))
    lo = _kernels.lowess_windows(xs, ux, r)
    delta = np.ones(n, dtype=np.float64)
    out = np.empty(ux.shape[0], dtype=np.float64)
    for pass_no in range(iterations + 1):
        _kernels.lowess_pass(xs, ys, delta, ux, lo, r, out)
        if pass_no == iterations:
            break
        resid = ys - out[inv]
        s = float(np.median(np.abs(resid)))
        if s <= 0.0:
            delta = np.ones(n, dtype=np.float64)
            continue
        u = np.clip(resid / (6.0 * s), -1.0, 1.0)
        delta = (1.0 - u * u) ** 2
    return LowessCurve(x=ux, y=out, frac=frac, iterations=iterations)
