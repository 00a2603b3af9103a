#!/usr/bin/env python3
"""Time the compiled kernels against their pure-interpreter twins.

Usage: python benchmarks/bench_kernels.py [--scale small|medium] [--repeat N]

Both backends run on identical inputs; outputs are cross-checked before
timing so a speedup never hides a divergence.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qscape import _kernels
from qscape._kernels import rng as krng
from qscape.geometry import Polygon, pack_polygons
from qscape.lisa import standardize
from qscape.weights import queen_contiguity, row_standardize

SCALES = {
    "small": dict(knn_n=20_000, knn_q=200, idw_n=20_000, pip_n=20_000, moran_n=100, moran_perm=499, lowess_n=2_000),
    "medium": dict(knn_n=100_000, knn_q=1_000, idw_n=100_000, pip_n=100_000, moran_n=400, moran_perm=999, lowess_n=5_000),
}


def timed(fn, args, repeat):
    fn(*args)  # warm-up (and JIT compile)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def square(x, y, side=1.0):
    return Polygon(
        exterior=np.array([[x, y], [x + side, y], [x + side, y + side], [x, y + side], [x, y]])
    )


def bench_knn(sizes, rng):
    n, nq, k = sizes["knn_n"], sizes["knn_q"], 30
    xs = rng.uniform(0, 10_000, n)
    ys = rng.uniform(0, 10_000, n)
    ids = np.arange(n, dtype=np.int64)
    tree = _kernels.build_kdtree(xs, ys, ids)
    qx = rng.uniform(0, 10_000, nq)
    qy = rng.uniform(0, 10_000, nq)

    def run(fn):
        pos = np.empty((nq, k), dtype=np.int64)
        oid = np.empty((nq, k), dtype=np.int64)
        d2 = np.empty((nq, k), dtype=np.float64)
        return fn, (qx, qy, k, xs, ys, ids, tree.axis, tree.split, tree.left, tree.right,
                    tree.start, tree.end, tree.perm, pos, oid, d2), oid

    return f"knn_batch ({nq} queries over {n:,} pts, k={k})", run


def bench_idw(sizes, rng):
    n, k = sizes["idw_n"], 30
    d = np.sort(rng.uniform(0.01, 500, size=(n, k)), axis=1)
    q = rng.normal(5, 2, size=(n, k))

    def run(fn):
        out = np.empty(n)
        return fn, (d, q, 2.0, 1e-9, out), out

    return f"idw_batch ({n:,} rows, k={k})", run


def bench_pip(sizes, rng):
    n = sizes["pip_n"]
    polys = [square(float(c) * 1.0, float(r) * 1.0) for r in range(10) for c in range(10)]
    soup = pack_polygons(polys)
    px = rng.uniform(-0.5, 10.5, n)
    py = rng.uniform(-0.5, 10.5, n)

    def run(fn):
        out = np.empty(n, dtype=np.int64)
        return fn, (px, py, soup.vx, soup.vy, soup.ring_ptr, soup.poly_ring_ptr, soup.poly_bbox, out), out

    return f"assign_points ({n:,} pts vs 100 polygons)", run


def bench_moran(sizes, rng):
    side = int(np.sqrt(sizes["moran_n"]))
    n = side * side
    n_perm = sizes["moran_perm"]
    cells = [square(float(c), float(r)) for r in range(side) for c in range(side)]
    w = row_standardize(queen_contiguity(cells))
    z = standardize(rng.normal(size=n))
    indptr, indices, wvals = w.to_csr()
    draws, drawptr = krng.perm_draw_table(3, w.cardinalities(), n_perm)

    def run(fn):
        p = np.empty(n)
        m = np.empty(n)
        s = np.empty(n)
        return fn, (z, wvals, indices, indptr, n_perm, draws, drawptr, p, m, s), p

    return f"moran_perm ({n} obs x {n_perm} permutations)", run


def bench_lowess(sizes, rng):
    n = sizes["lowess_n"]
    xs = np.sort(rng.uniform(0, 100, n))
    ys = np.sin(xs / 5) + rng.normal(0, 0.2, n)
    ux = np.unique(xs)
    r = max(2, int(0.3 * n))
    lo = _kernels.lowess_windows(xs, ux, r)
    delta = np.ones(n)

    def run(fn):
        out = np.empty(ux.shape[0])
        return fn, (xs, ys, delta, ux, lo, r, out), out

    return f"lowess_pass ({n:,} pts, frac=0.3)", run


PAIRS = [
    (bench_knn, "knn_batch"),
    (bench_idw, "idw_batch"),
    (bench_pip, "assign_points"),
    (bench_moran, "moran_perm"),
    (bench_lowess, "lowess_pass"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", choices=sorted(SCALES), default="small")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend exists -- nothing to compare")
        return 1

    sizes = SCALES[args.scale]
    rng = np.random.default_rng(0)
    rows = []
    for factory, name in PAIRS:
        label, make = factory(sizes, rng)
        py_fn = getattr(_kernels, f"{name}_py")
        jit_fn = getattr(_kernels, f"{name}_jit")

        fn, jit_args, jit_out = make(jit_fn)
        fn(*jit_args)
        fn, py_args, py_out = make(py_fn)
        fn(*py_args)
        if not np.allclose(py_out, jit_out, rtol=0, atol=0, equal_nan=True):
            raise AssertionError(f"{name}: backend outputs differ")

        t_jit = timed(jit_fn, make(jit_fn)[1], args.repeat)
        t_py = timed(py_fn, make(py_fn)[1], max(1, args.repeat // 3))
        rows.append((label, t_py, t_jit, t_py / t_jit))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy (s)':>10}  {'numba (s)':>10}  {'speedup':>8}")
    for label, t_py, t_jit, speedup in rows:
        print(f"{label:<{width}}  {t_py:>10.4f}  {t_jit:>10.4f}  {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
