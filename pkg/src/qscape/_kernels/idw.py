"""Inverse-distance weighting over per-row neighbor tables.

Rows are the query sites; columns hold the k neighbor distances (ascending)
and their scores.  A row whose nearest distance falls below ``eps`` takes
that neighbor's score verbatim instead of dividing by (almost) zero.
Accumulation order is fixed left-to-right so serial and parallel runs agree
bit-for-bit.
"""

from __future__ import annotations

from . import active, compile_kernel, prange


def _idw_batch(dist, score, power, eps, out):
    n = dist.shape[0]
    k = dist.shape[1]
    for i in prange(n):
        if dist[i, 0] < eps:
            out[i] = score[i, 0]
        else:
            sw = 0.0
            swq = 0.0
            for t in range(k):
                w = dist[i, t] ** (-power)
                sw += w
                swq += w * score[i, t]
            out[i] = swq / sw


idw_batch_py = _idw_batch
idw_batch_jit = compile_kernel(_idw_batch, parallel=True)
idw_batch = active(idw_batch_py, idw_batch_jit)
