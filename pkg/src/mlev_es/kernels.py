"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba and a
vectorised numpy version. The public names at the bottom of the module are
bound to one or the other at import time (see ``mlev_es._accel``). Random
variates are drawn from the caller's ``numpy.random.Generator`` on both
paths; numba consumes the same bit stream, so sampled values are identical
regardless of backend.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

__all__ = [
    "standard_normal",
    "standard_normal_matrix",
    "pchip_eval",
    "self_convolve_direct",
    "sep_cma_diag_update",
    "midranks",
    "BACKEND",
]


# ---------------------------------------------------------------------------
# numba versions


@njit(cache=True)
def _standard_normal_nb(rng, n):
    return rng.standard_normal(n)


@njit(cache=True)
def _standard_normal_matrix_nb(rng, rows, cols):
    return rng.standard_normal((rows, cols))


@njit(cache=True)
def _edge_slope(h0, h1, m0, m1):
    d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    if np.sign(d) != np.sign(m0):
        return 0.0
    if np.sign(m0) != np.sign(m1) and abs(d) > 3.0 * abs(m0):
        return 3.0 * m0
    return d


@njit(cache=True)
def _pchip_slopes_nb(x, y):
    n = x.shape[0]
    h = np.empty(n - 1)
    m = np.empty(n - 1)
    for i in range(n - 1):
        h[i] = x[i + 1] - x[i]
        m[i] = (y[i + 1] - y[i]) / h[i]
    d = np.zeros(n)
    if n == 2:
        d[0] = m[0]
        d[1] = m[0]
        return d
    for i in range(1, n - 1):
        a = m[i - 1]
        b = m[i]
        if a == 0.0 or b == 0.0 or np.sign(a) != np.sign(b):
            d[i] = 0.0
        else:
            w1 = 2.0 * h[i] + h[i - 1]
            w2 = h[i] + 2.0 * h[i - 1]
            d[i] = (w1 + w2) / (w1 / a + w2 / b)
    d[0] = _edge_slope(h[0], h[1], m[0], m[1])
    d[n - 1] = _edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3])
    return d


@njit(cache=True)
def _pchip_eval_nb(x, y, xq):
    d = _pchip_slopes_nb(x, y)
    n = x.shape[0]
    out = np.empty(xq.shape[0])
    k = 0
    for j in range(xq.shape[0]):
        t = xq[j]
        while k < n - 2 and t > x[k + 1]:
            k += 1
        h = x[k + 1] - x[k]
        s = (t - x[k]) / h
        s2 = s * s
        s3 = s2 * s
        out[j] = (
            (2.0 * s3 - 3.0 * s2 + 1.0) * y[k]
            + (s3 - 2.0 * s2 + s) * h * d[k]
            + (-2.0 * s3 + 3.0 * s2) * y[k + 1]
            + (s3 - s2) * h * d[k + 1]
        )
    return out


@njit(cache=True)
def _self_convolve_direct_nb(a):
    n = a.shape[0]
    out = np.zeros(2 * n - 1, dtype=np.complex128)
    for i in range(n):
        ai = a[i]
        for j in range(n):
            out[i + j] += ai * a[j]
    return out


@njit(cache=True)
def _sep_cma_diag_update_nb(c, pc, y_sel, weights, c_cov, mu_cov, rank_one_extra):
    n = c.shape[0]
    mu = weights.shape[0]
    out = np.empty(n)
    a1 = c_cov / mu_cov
    a2 = c_cov * (1.0 - 1.0 / mu_cov)
    for i in range(n):
        rank_mu = 0.0
        for k in range(mu):
            rank_mu += weights[k] * y_sel[k, i] * y_sel[k, i]
        out[i] = (1.0 - c_cov) * c[i] + a1 * (pc[i] * pc[i] + rank_one_extra * c[i]) + a2 * rank_mu
    return out


@njit(cache=True)
def _midranks_nb(x):
    n = x.shape[0]
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and x[order[j + 1]] == x[order[i]]:
            j += 1
        r = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = r
        i = j + 1
    return ranks


# ---------------------------------------------------------------------------
# numpy versions


def _standard_normal_np(rng, n):
    return rng.standard_normal(n)


def _standard_normal_matrix_np(rng, rows, cols):
    return rng.standard_normal((rows, cols))


def _edge_slope_np(h0, h1, m0, m1):
    d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    if np.sign(d) != np.sign(m0):
        return 0.0
    if np.sign(m0) != np.sign(m1) and abs(d) > 3.0 * abs(m0):
        return 3.0 * m0
    return d


def _pchip_slopes_np(x, y):
    h = np.diff(x)
    m = np.diff(y) / h
    if x.shape[0] == 2:
        return np.array([m[0], m[0]])
    d = np.zeros(x.shape[0])
    a, b = m[:-1], m[1:]
    flat = (a == 0.0) | (b == 0.0) | (np.sign(a) != np.sign(b))
    w1 = 2.0 * h[1:] + h[:-1]
    w2 = h[1:] + 2.0 * h[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        interior = (w1 + w2) / (w1 / a + w2 / b)
    d[1:-1] = np.where(flat, 0.0, interior)
    d[0] = _edge_slope_np(h[0], h[1], m[0], m[1])
    d[-1] = _edge_slope_np(h[-1], h[-2], m[-1], m[-2])
    return d


def _pchip_eval_np(x, y, xq):
    d = _pchip_slopes_np(x, y)
    k = np.clip(np.searchsorted(x, xq, side="left") - 1, 0, x.shape[0] - 2)
    h = x[k + 1] - x[k]
    s = (xq - x[k]) / h
    s2 = s * s
    s3 = s2 * s
    return (
        (2.0 * s3 - 3.0 * s2 + 1.0) * y[k]
        + (s3 - 2.0 * s2 + s) * h * d[k]
        + (-2.0 * s3 + 3.0 * s2) * y[k + 1]
        + (s3 - s2) * h * d[k + 1]
    )


def _self_convolve_direct_np(a):
    n = a.shape[0]
    out = np.zeros(2 * n - 1, dtype=np.complex128)
    for i in range(n):
        out[i:i + n] += a[i] * a
    return out


def _sep_cma_diag_update_np(c, pc, y_sel, weights, c_cov, mu_cov, rank_one_extra):
    # same operation order as the compiled loop, so both backends agree bitwise
    a1 = c_cov / mu_cov
    a2 = c_cov * (1.0 - 1.0 / mu_cov)
    rank_mu = np.zeros(c.shape[0])
    for k in range(weights.shape[0]):
        rank_mu += weights[k] * y_sel[k] * y_sel[k]
    return (1.0 - c_cov) * c + a1 * (pc * pc + rank_one_extra * c) + a2 * rank_mu


def _midranks_np(x):
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    n = xs.shape[0]
    starts = np.flatnonzero(np.r_[True, xs[1:] != xs[:-1]])
    ends = np.r_[starts[1:], n] - 1
    group_rank = 0.5 * (starts + ends) + 1.0
    ranks = np.empty(n)
    ranks[order] = np.repeat(group_rank, ends - starts + 1)
    return ranks


# ---------------------------------------------------------------------------
# dispatch

# below this many variates the call overhead outweighs the compiled speed-up
MIN_COMPILED_DRAWS = 2048

if HAVE_NUMBA:
    BACKEND = "numba"
    _standard_normal = _standard_normal_nb
    _standard_normal_matrix = _standard_normal_matrix_nb
    _pchip_eval = _pchip_eval_nb
    _self_convolve_direct = _self_convolve_direct_nb
    _sep_cma_diag_update = _sep_cma_diag_update_nb
    _midranks = _midranks_nb
else:
    BACKEND = "numpy"
    _standard_normal = _standard_normal_np
    _standard_normal_matrix = _standard_normal_matrix_np
    _pchip_eval = _pchip_eval_np
    _self_convolve_direct = _self_convolve_direct_np
    _sep_cma_diag_update = _sep_cma_diag_update_np
    _midranks = _midranks_np


def standard_normal(rng, n):
    """Draw ``n`` standard normal variates from ``rng``.

    Both backends consume the generator identically, so small draws go to
    numpy: passing a Generator into compiled code costs ~30 us per call.
    """
    n = int(n)
    if n < MIN_COMPILED_DRAWS:
        return _standard_normal_np(rng, n)
    return _standard_normal(rng, n)


def standard_normal_matrix(rng, rows, cols):
    rows, cols = int(rows), int(cols)
    if rows * cols < MIN_COMPILED_DRAWS:
        return _standard_normal_matrix_np(rng, rows, cols)
    return _standard_normal_matrix(rng, rows, cols)


def pchip_eval(x, y, xq):
    """Shape-preserving piecewise cubic Hermite interpolation.

    Slopes follow Fritsch & Carlson with the weighted harmonic mean at
    interior knots and the three-point one-sided formula at the ends.
    ``x`` must be strictly increasing and ``xq`` sorted within ``[x[0], x[-1]]``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    xq = np.ascontiguousarray(xq, dtype=np.float64)
    return _pchip_eval(x, y, xq)


def self_convolve_direct(a):
    """Full linear self-convolution by the O(n^2) double sum."""
    return _self_convolve_direct(np.ascontiguousarray(a, dtype=np.complex128))


def sep_cma_diag_update(c, pc, y_sel, weights, c_cov, mu_cov, rank_one_extra):
    """Diagonal covariance update (rank-one + rank-mu) of sep-CMA-ES."""
    return _sep_cma_diag_update(
        np.ascontiguousarray(c),
        np.ascontiguousarray(pc),
        np.ascontiguousarray(y_sel),
        np.ascontiguousarray(weights),
        float(c_cov),
        float(mu_cov),
        float(rank_one_extra),
    )


def midranks(x):
    """1-based ranks with ties replaced by the mean of their positions."""
    return _midranks(np.ascontiguousarray(x, dtype=np.float64))
