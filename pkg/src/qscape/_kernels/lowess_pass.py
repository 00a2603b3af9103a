"""One smoothing pass of locally weighted linear regression.

``lowess_windows`` slides the size-r window of nearest x-neighbors over the
sorted sample (ties prefer the smaller x, matching a stable sort by x and
input index).  The pass kernel fits, per evaluation point, a weighted line
on x offsets with tricube distance weights times the caller's robustness
weights, falling back to the weighted mean when the window has no usable
x spread.  Robustness iterations live in the caller; windows depend only
on x and are computed once.
"""

from __future__ import annotations

import numpy as np

from . import active, compile_kernel, prange


def lowess_windows(xs_sorted: np.ndarray, ux: np.ndarray, r: int) -> np.ndarray:
    """Window start per evaluation point; the window is [lo, lo + r)."""
    n = xs_sorted.shape[0]
    m = ux.shape[0]
    lo = np.empty(m, dtype=np.int64)
    l = 0
    for j in range(m):
        x0 = ux[j]
        while l + r < n and (xs_sorted[l + r] - x0) < (x0 - xs_sorted[l]):
            l += 1
        lo[j] = l
    return lo


def _lowess_pass(xs, ys, delta, ux, lo, r, out):
    m = ux.shape[0]
    for j in prange(m):
        x0 = ux[j]
        a = lo[j]
        b = a + r
        dmax = x0 - xs[a]
        d_right = xs[b - 1] - x0
        if d_right > dmax:
            dmax = d_right
        if dmax <= 0.0:
            sw = 0.0
            swy = 0.0
            for t in range(a, b):
                sw += delta[t]
                swy += delta[t] * ys[t]
            if sw > 0.0:
                out[j] = swy / sw
            else:
                acc = 0.0
                for t in range(a, b):
                    acc += ys[t]
                out[j] = acc / r
            continue
        sw = 0.0
        swx = 0.0
        swy = 0.0
        swxx = 0.0
        swxy = 0.0
        for t in range(a, b):
            tx = xs[t] - x0
            u = tx / dmax
            if u < 0.0:
                u = -u
            if u < 1.0:
                w = 1.0 - u * u * u
                w = w * w * w
            else:
                w = 0.0
            w *= delta[t]
            sw += w
            swx += w * tx
            swy += w * ys[t]
            swxx += w * tx * tx
            swxy += w * tx * ys[t]
        denom = sw * swxx - swx * swx
        if denom > 1e-12 * sw * swxx:
            beta = (sw * swxy - swx * swy) / denom
            out[j] = (swy - beta * swx) / sw
        elif sw > 0.0:
            out[j] = swy / sw
        else:
            acc = 0.0
            for t in range(a, b):
                acc += ys[t]
            out[j] = acc / r


lowess_pass_py = _lowess_pass
lowess_pass_jit = compile_kernel(_lowess_pass, parallel=True)
lowess_pass = active(lowess_pass_py, lowess_pass_jit)
