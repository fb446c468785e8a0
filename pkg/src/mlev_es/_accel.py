"""Numba dispatch switch.

Set ``MLEV_ES_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels, e.g. for debugging or on platforms without numba.
"""
import os

_flag = os.environ.get("MLEV_ES_DISABLE_NUMBA", "").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
