import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

import oracles
from mlev_es.errors import InterpolationError
from mlev_es.objectives import sphere
from mlev_es.upscale import (
    get_operator,
    nearest_indices,
    upscale,
    upscale_cubic,
    upscale_linear,
    upscale_nearest,
)

vectors = hnp.arrays(np.float64, st.integers(4, 50), elements=st.floats(-1e3, 1e3))


def test_nearest_examples():
    assert upscale_nearest([1, 3], 4).tolist() == [1, 1, 3, 3]
    assert upscale_nearest([5], 4).tolist() == [5, 5, 5, 5]
    assert upscale_nearest([0, 1, 2], 3).tolist() == [0, 1, 2]


def test_linear_examples():
    np.testing.assert_allclose(upscale_linear([0, 2], 4), [0, 2 / 3, 4 / 3, 2], atol=1e-15)
    assert upscale_linear([1, 1, 1], 6).tolist() == [1.0] * 6
    np.testing.assert_allclose(upscale_linear([0, 1, 0], 5), [0, 0.5, 1, 0.5, 0], atol=1e-15)


def test_cubic_examples():
    assert upscale_cubic([1, 1, 1, 1], 8).tolist() == [1.0] * 8
    out = upscale_cubic([0, 1, 2, 3], 7)
    assert out[0] == 0 and out[-1] == 3
    assert np.all(np.diff(out) >= 0)
    out = upscale_cubic([0, 1, 0, 1], 8)
    assert np.all((out >= 0) & (out <= 1))
    ref = oracles.pchip_reference(np.arange(4.0), [0, 1, 0, 1], np.arange(8) * 3 / 7)
    np.testing.assert_allclose(out, ref, atol=1e-12)


def test_preconditions():
    with pytest.raises(InterpolationError):
        upscale_nearest([1, 2, 3], 2)
    with pytest.raises(InterpolationError):
        upscale_linear([1.0], 4)
    with pytest.raises(InterpolationError):
        upscale_cubic([1, 2, 3], 8)
    with pytest.raises(InterpolationError):
        get_operator("U-9")


def test_operator_aliases():
    assert get_operator("nearest") == "U-1"
    assert get_operator("u2") == "U-2"
    assert get_operator("pchip") == "U-3"


@pytest.mark.parametrize("op", ["U-1", "U-2", "U-3"])
@given(v=vectors, extra=st.integers(0, 200))
def test_endpoints_fixed(op, v, extra):
    out = upscale(v, v.size + extra, op)
    assert out[0] == v[0] and out[-1] == v[-1]


@pytest.mark.parametrize("op", ["U-1", "U-2", "U-3"])
@given(v=vectors)
def test_idempotent_at_same_size(op, v):
    assert np.array_equal(upscale(v, v.size, op), v)


@pytest.mark.parametrize("n", range(1, 65))
def test_nearest_doubling_duplicates(n):
    idx = nearest_indices(n, 2 * n)
    assert np.array_equal(idx, np.repeat(np.arange(n), 2))
    v = np.random.default_rng(n).normal(size=n)
    out = upscale_nearest(v, 2 * n)
    assert set(out.tolist()) == set(v.tolist())


@given(hnp.arrays(np.float64, st.integers(1, 64), elements=st.floats(-1e3, 1e3)))
def test_sphere_doubles_under_duplication(v):
    # each square appears exactly twice, so the float sum doubles exactly
    # when summed in the same pairwise order
    up = upscale_nearest(v, 2 * v.size)
    assert oracles.sphere_loop(up) == 2 * oracles.sphere_loop(v)
    assert sphere(up) == pytest.approx(2 * sphere(v), rel=1e-12, abs=0)


@given(vectors, st.integers(0, 100))
def test_cubic_no_overshoot(v, extra):
    out = upscale_cubic(v, v.size + extra)
    assert out.min() >= v.min() - 1e-9 * max(1, abs(v.min()))
    assert out.max() <= v.max() + 1e-9 * max(1, abs(v.max()))


@given(st.integers(1, 300), st.integers(0, 300))
def test_nearest_indices_against_float_rounding(n, extra):
    m = n + extra
    idx = nearest_indices(n, m)
    assert idx[0] == 0 and idx[-1] == n - 1
    assert np.all(np.diff(idx) >= 0)
    if m > 1 and n > 1:
        pos = np.arange(m) * (n - 1) / (m - 1)
        # nearest in exact arithmetic; ties resolved downward
        assert np.all(np.abs(pos - idx) <= 0.5 + 1e-12)
