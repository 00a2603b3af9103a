"""Local Moran statistics with conditional permutation inference.

``local_i[i] = z[i] * lag[i]`` with ``lag`` the row-standardized spatial
lag of population z-scores.  Significance is a conditional permutation
test: ``z[i]`` stays fixed while the other ``n-1`` values are reassigned
to i's neighbor slots without replacement; the pseudo p-value counts
permuted statistics at least as extreme as the observed one on the side
where it is extreme.  Draws come from counter-based per-observation
streams keyed on ``(seed, observation_id)``, so identical inputs give
identical p-values on any backend and thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .weights import SpatialWeights

CLUSTER_HH = "HH"
CLUSTER_LL = "LL"
CLUSTER_LH = "LH"
CLUSTER_HL = "HL"
CLUSTER_NS = "NS"
CLUSTER_ISOLATE = "ISOLATE"

DEFAULT_N_PERM = 999
DEFAULT_ALPHA = 0.05


class LisaError(ValueError):
    pass


@dataclass
class LisaResult:
    observation_id: int
    z: float
    lag: float
    local_i: float
    expected_i: float
    pseudo_p: float
    cluster: str


@dataclass
class PermutationResult:
    pseudo_p: np.ndarray
    perm_mean: np.ndarray  # mean of the permuted statistics per observation
    perm_std: np.ndarray


def standardize(values) -> np.ndarray:
    """Population z-scores (divide by n)."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise LisaError("standardize needs at least 2 values")
    if not np.all(np.isfinite(x)):
        raise LisaError("values must be finite")
    mean = x.mean()
    sigma = np.sqrt(np.mean((x - mean) ** 2))
    if sigma == 0.0:
        raise LisaError("constant attribute")
    return (x - mean) / sigma


def _require_standardized(w: SpatialWeights) -> None:
    if not w.standardized:
        raise LisaError("weights must be row-standardized")


def local_moran(z: np.ndarray, w: SpatialWeights) -> tuple[np.ndarray, np.ndarray]:
    """(local_i, lag) per observation; isolates get zeros."""
    _require_standardized(w)
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] != w.n:
        raise LisaError(f"{z.shape[0]} values vs {w.n} observations")
    lag = np.zeros(w.n, dtype=np.float64)
    for i in range(w.n):
        nb = w.neighbors[i]
        if len(nb):
            lag[i] = float(np.dot(w.weights[i], z[nb]))
    return z * lag, lag


def expected_local_i(w: SpatialWeights) -> np.ndarray:
    """Total-randomization expectation: -(row sum)/(n-1)."""
    return -w.row_sums() / (w.n - 1)


def global_moran(z: np.ndarray, w: SpatialWeights) -> float:
    """Directly computed global statistic, used as a cross-check."""
    _require_standardized(w)
    z = np.asarray(z, dtype=np.float64)
    s0 = float(w.row_sums().sum())
    num = 0.0
    for i in range(w.n):
        nb = w.neighbors[i]
        if len(nb):
            num += z[i] * float(np.dot(w.weights[i], z[nb]))
    return (w.n / s0) * num / float(np.dot(z, z))


def permutation_test(values, w: SpatialWeights, n_perm: int = DEFAULT_N_PERM, seed: int = 0) -> PermutationResult:
    """Conditional permutation pseudo p-values, deterministic for a seed."""
    _require_standardized(w)
    if n_perm < 1:
        raise LisaError("n_perm must be >= 1")
    z = standardize(values)
    if z.shape[0] != w.n:
        raise LisaError(f"{z.shape[0]} values vs {w.n} observations")
    indptr, indices, wvals = w.to_csr()
    draws, drawptr = _kernels.rng.perm_draw_table(seed, w.cardinalities(), n_perm)
    out_p = np.empty(w.n, dtype=np.float64)
    out_mean = np.empty(w.n, dtype=np.float64)
    out_std = np.empty(w.n, dtype=np.float64)
    _kernels.moran_perm(z, wvals, indices, indptr, n_perm, draws, drawptr, out_p, out_mean, out_std)
    return PermutationResult(pseudo_p=out_p, perm_mean=out_mean, perm_std=out_std)


def classify(z: float, lag: float, pseudo_p: float, alpha: float, isolate: bool = False) -> str:
    if isolate:
        return CLUSTER_ISOLATE
    if pseudo_p > alpha:
        return CLUSTER_NS
    if z > 0 and lag > 0:
        return CLUSTER_HH
    if z < 0 and lag < 0:
        return CLUSTER_LL
    if z < 0 and lag > 0:
        return CLUSTER_LH
    if z > 0 and lag < 0:
        return CLUSTER_HL
    return CLUSTER_NS  # z or lag exactly zero carries no quadrant


def run_lisa(
    values,
    w: SpatialWeights,
    n_perm: int = DEFAULT_N_PERM,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> list[LisaResult]:
    """standardize -> local_moran -> permutation_test -> classify."""
    if not 0 < alpha < 1:
        raise LisaError("alpha must be in (0, 1)")
    z = standardize(values)
    local_i, lag = local_moran(z, w)
    perm = permutation_test(values, w, n_perm=n_perm, seed=seed)
    expected = expected_local_i(w)
    cards = w.cardinalities()
    results = []
    for i in range(w.n):
        isolate = cards[i] == 0
        results.append(
            LisaResult(
                observation_id=i,
                z=float(z[i]),
                lag=float(lag[i]),
                local_i=float(local_i[i]),
                expected_i=float(expected[i]),
                pseudo_p=1.0 if isolate else float(perm.pseudo_p[i]),
                cluster=classify(float(z[i]), float(lag[i]), float(perm.pseudo_p[i]), alpha, isolate=bool(isolate)),
            )
        )
    return results
