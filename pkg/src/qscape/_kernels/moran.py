"""Local Moran statistics under conditional permutation.

For observation ``i`` the kernel holds ``z[i]`` fixed and, per permutation,
assigns a without-replacement sample of the other ``n-1`` standardized
values to i's neighbor slots (partial Fisher-Yates driven by the
pre-generated draw table), recomputing ``z[i] * lag``.  The pseudo p-value
is ``(R+1)/(n_perm+1)`` with ``R`` the count of permuted statistics at
least as extreme as the observed one, one-sided on whichever side the
observed value is extreme (``min`` of the two tail counts).  Isolates get
p = 1 and zero moments.

Observations are independent, so the loop parallelizes without changing
any output bit.
"""

from __future__ import annotations

import numpy as np

from . import active, compile_kernel, prange


def _moran_perm(z, wvals, indices, indptr, n_perm, draws, drawptr, out_p, out_mean, out_std):
    n = z.shape[0]
    for i in prange(n):
        s = indptr[i]
        c = indptr[i + 1] - s
        if c == 0:
            out_p[i] = 1.0
            out_mean[i] = 0.0
            out_std[i] = 0.0
            continue
        lag = 0.0
        for t in range(c):
            lag += wvals[s + t] * z[indices[s + t]]
        obs = z[i] * lag

        m = n - 1
        pool = np.empty(m, np.float64)
        idx = 0
        for j in range(n):
            if j != i:
                pool[idx] = z[j]
                idx += 1
        pos = np.empty(m, np.int64)
        for j in range(m):
            pos[j] = j
        swaps = np.empty(c, np.int64)

        base = drawptr[i]
        r_up = 0
        r_dn = 0
        acc = 0.0
        acc2 = 0.0
        for p in range(n_perm):
            lagp = 0.0
            for t in range(c):
                r = t + ((draws[base + p * c + t] * (m - t)) >> 32)
                swaps[t] = r
                tmp = pos[t]
                pos[t] = pos[r]
                pos[r] = tmp
                lagp += wvals[s + t] * pool[pos[t]]
            stat = z[i] * lagp
            if stat >= obs:
                r_up += 1
            if stat <= obs:
                r_dn += 1
            acc += stat
            acc2 += stat * stat
            for t in range(c - 1, -1, -1):
                r = swaps[t]
                tmp = pos[t]
                pos[t] = pos[r]
                pos[r] = tmp
        rmin = r_up if r_up < r_dn else r_dn
        out_p[i] = (rmin + 1.0) / (n_perm + 1.0)
        mean = acc / n_perm
        out_mean[i] = mean
        var = acc2 / n_perm - mean * mean
        if var < 0.0:
            var = 0.0
        out_std[i] = np.sqrt(var)


moran_perm_py = _moran_perm
moran_perm_jit = compile_kernel(_moran_perm, parallel=True)
moran_perm = active(moran_perm_py, moran_perm_jit)
