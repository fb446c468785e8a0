"""Upscale operators: nearest neighbour, linear and shape-preserving cubic.

All three use the same grid alignment. Input sample ``i`` of ``n`` sits at
``i / (n - 1)`` and output sample ``j`` of ``m`` at ``j / (m - 1)``, so the
first and last values are carried over unchanged.
"""
import numpy as np

from . import kernels
from .errors import InterpolationError


def _prepare(v, m, min_len):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise InterpolationError("upscale expects a 1-D vector")
    n = v.shape[0]
    m = int(m)
    if n < min_len:
        raise InterpolationError(f"need at least {min_len} points, got {n}")
    if m < n:
        raise InterpolationError(f"cannot downscale from {n} to {m} points")
    return v, n, m


def _positions(n, m):
    """Output sample positions measured in input-index units."""
    if m == 1:
        return np.zeros(1)
    return np.arange(m) * (n - 1) / (m - 1)


def nearest_indices(n, m):
    """Index of the nearest input sample for each of ``m`` outputs.

    Exact integer arithmetic; midpoint ties go to the lower index.
    """
    if m == 1 or n == 1:
        return np.zeros(m, dtype=np.int64)
    q, r = np.divmod(np.arange(m, dtype=np.int64) * (n - 1), m - 1)
    return q + (2 * r > m - 1)


def upscale_nearest(v, m):
    v, n, m = _prepare(v, m, 1)
    return v[nearest_indices(n, m)]


def upscale_linear(v, m):
    v, n, m = _prepare(v, m, 2)
    out = np.interp(_positions(n, m), np.arange(n, dtype=np.float64), v)
    out[0], out[-1] = v[0], v[-1]
    return out


def upscale_cubic(v, m):
    """Monotone piecewise cubic Hermite (PCHIP) interpolation; needs 4 points."""
    v, n, m = _prepare(v, m, 4)
    out = kernels.pchip_eval(np.arange(n, dtype=np.float64), v, _positions(n, m))
    out[0], out[-1] = v[0], v[-1]
    return out


OPERATORS = {
    "U-1": upscale_nearest,
    "U-2": upscale_linear,
    "U-3": upscale_cubic,
}

_ALIASES = {
    "u1": "U-1", "nearest": "U-1",
    "u2": "U-2", "linear": "U-2",
    "u3": "U-3", "cubic": "U-3", "pchip": "U-3",
}


def get_operator(name):
    key = str(name).strip()
    if key.upper() in OPERATORS:
        return key.upper()
    alias = _ALIASES.get(key.lower().replace("-", "").replace("_", ""))
    if alias is None:
        raise InterpolationError(f"unknown upscale operator {name!r}")
    return alias


def upscale(v, m, operator):
    return OPERATORS[get_operator(operator)](v, m)
