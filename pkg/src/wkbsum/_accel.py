"""Numba switch.

Set ``WKBSUM_DISABLE_NUMBA=1`` to run every kernel through its pure-numpy
path.  The flag is read once at import time.
"""
import os

_DISABLED = os.environ.get("WKBSUM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    njit = numba.njit(cache=True, nogil=True)
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

    def njit(fn):
        return fn


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
