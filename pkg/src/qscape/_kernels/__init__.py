"""Hot numerical kernels with two interchangeable backends.

Every kernel is written once, in loop style, and exported twice:

* ``<name>_jit`` -- the source compiled with ``numba.njit`` (parallel where
  the loop is embarrassingly parallel).  ``None`` when numba is missing.
* ``<name>_py``  -- the same source executed by the plain interpreter on
  NumPy arrays.

The active backend (module attribute ``<name>``) is the jitted one unless
numba is unavailable or ``QSCAPE_DISABLE_NUMBA=1`` is set in the
environment.  Both backends consume the same pre-generated random draws
(see :mod:`qscape._kernels.rng`), and every kernel writes each output
element independently, so results are identical across backends and
thread counts.  ``benchmarks/bench_kernels.py`` times one against the
other.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
    prange = numba.prange
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False
    prange = range

ENV_FLAG = "QSCAPE_DISABLE_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


NUMBA_ACTIVE = HAVE_NUMBA and not numba_disabled()


def compile_kernel(fn, parallel=False):
    """Return the njit-compiled twin of ``fn`` (or None without numba)."""
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, parallel=parallel)(fn)


def active(py_fn, jit_fn):
    return jit_fn if (jit_fn is not None and NUMBA_ACTIVE) else py_fn


def backend_name() -> str:
    return "numba" if NUMBA_ACTIVE else "numpy"


from . import rng  # noqa: E402
from .kdtree import (  # noqa: E402
    build_kdtree,
    knn_batch,
    knn_batch_jit,
    knn_batch_py,
)
from .idw import idw_batch, idw_batch_jit, idw_batch_py  # noqa: E402
from .polyscan import (  # noqa: E402
    assign_points,
    assign_points_jit,
    assign_points_py,
)
from .moran import (  # noqa: E402
    moran_perm,
    moran_perm_jit,
    moran_perm_py,
)
from .lowess_pass import (  # noqa: E402
    lowess_windows,
    lowess_pass,
    lowess_pass_jit,
    lowess_pass_py,
)

__all__ = [
    "HAVE_NUMBA",
    "NUMBA_ACTIVE",
    "ENV_FLAG",
    "backend_name",
    "build_kdtree",
    "knn_batch",
    "knn_batch_jit",
    "knn_batch_py",
    "idw_batch",
    "idw_batch_jit",
    "idw_batch_py",
    "assign_points",
    "assign_points_jit",
    "assign_points_py",
    "moran_perm",
    "moran_perm_jit",
    "moran_perm_py",
    "lowess_windows",
    "lowess_pass",
    "lowess_pass_jit",
    "lowess_pass_py",
    "rng",
]
