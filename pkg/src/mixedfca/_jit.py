"""Backend selection for the compiled kernels.

Set ``MIXEDFCA_DISABLE_NUMBA=1`` to force the pure-numpy path. If numba is not
importable the numpy path is used regardless.
"""
import os

_FLAG = os.environ.get("MIXEDFCA_DISABLE_NUMBA", "").strip().lower()

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap


USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")
