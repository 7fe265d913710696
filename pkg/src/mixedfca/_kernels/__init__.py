"""Hot loops: lectic mining over 3^|M| sign assignments and the 4^|N| candidate grid.

``BACKEND`` is ``"numba"`` unless ``MIXEDFCA_DISABLE_NUMBA`` is set or numba is
missing. Both implementations are importable directly for benchmarking and
cross-checking.
"""
import importlib

import numpy as np

from .._jit import USE_NUMBA
from . import numpy_impl

BUILTIN_CODES = {"example2-poly": 0, "exp1": 1, "exp2": 2}

if USE_NUMBA:
    from . import numba_impl

    BACKEND = "numba"
    _impl = numba_impl
else:
    numba_impl = None
    BACKEND = "numpy"
    _impl = numpy_impl


def mine(rows, n_attrs, collect_intents, backend=None):
    """Run the mining loop. Returns (sigma[k,4], intents[j,2], closure_evaluations)."""
    impl = _select(backend)
    return impl.mine(np.asarray(rows, dtype=np.int64), int(n_attrs), bool(collect_intents))


def grid_search(row, cols, cands, code, target, backend=None):
    """Index (in enumeration order) and distance of the best candidate combination."""
    impl = _select(backend)
    best, dist = impl.grid_search(
        np.asarray(row, dtype=np.float64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(cands, dtype=np.float64),
        int(code),
        float(target),
    )
    return int(best), float(dist)


def _select(backend):
    if backend is None:
        return _impl
    if backend == "numpy":
        return numpy_impl
    if backend == "numba":
        # explicit request works even when the env flag disabled the default
        return importlib.import_module(f"{__name__}.numba_impl")
    raise ValueError(f"unknown backend {backend!r}")
