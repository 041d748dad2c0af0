import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzy_spectra.circle import (
    build_circle_operators,
    build_x1,
    circle_algebra_residuals,
    circle_coefficients,
    circle_x_squared,
)
from fuzzy_spectra.core import k_floor, make_params
from fuzzy_spectra.eigen import eigen_all


def test_coefficients_boundary_zeros():
    b = circle_coefficients(make_params(3))
    assert b(-3) == 0.0 and b(4) == 0.0
    assert b(0) == 1.0 and b(1) == 1.0
    assert b(3) == pytest.approx(math.sqrt(1 + 6 / 144))
    assert b(10) == 0.0


def test_coefficients_symmetric():
    # n(n-1) is invariant under n -> 1-n
    b = circle_coefficients(make_params(5))
    for n in range(-4, 6):
        assert b(n) == b(1 - n)


def test_x1_lambda1():
    t = build_x1(make_params(1))
    np.testing.assert_array_equal(t.offdiag, [0.5, 0.5])
    np.testing.assert_array_equal(t.diag, [0.0, 0.0, 0.0])


def test_x1_lambda2_k36():
    t = build_x1(make_params(2, 36))
    e = math.sqrt(1 + 2 / 36) / 2
    np.testing.assert_allclose(t.offdiag, [e, 0.5, 0.5, e], atol=1e-16)


def test_x1_matches_operator_build():
    p = make_params(4)
    ops = build_circle_operators(p)
    np.testing.assert_allclose(ops.x1.dense().real, build_x1(p).to_dense(), atol=1e-16)
    np.testing.assert_allclose(ops.x1.dense().imag, 0.0)


def test_spectrum_lambda1():
    s = eigen_all(build_x1(make_params(1)))
    np.testing.assert_allclose(s.values, [math.sqrt(2) / 2, 0, -math.sqrt(2) / 2], atol=1e-12)


@pytest.mark.parametrize("k", [36.0, 100.0, 1e6])
def test_spectrum_lambda2(k):
    s = eigen_all(build_x1(make_params(2, k)))
    a = 0.5 * math.sqrt(3 + 2 / k)
    b = 0.5 * math.sqrt(1 + 2 / k)
    np.testing.assert_allclose(s.values, [a, b, 0, -b, -a], atol=1e-12)


def test_sparse_build_equals_dense():
    p = make_params(6)
    dense = build_circle_operators(p)
    sparse = build_circle_operators(p, sparse=True)
    for a, b in zip(dense, sparse):
        assert b.is_sparse
        np.testing.assert_array_equal(a.dense(), b.dense())


def test_x_squared_diagonal():
    p = make_params(3)
    ops = build_circle_operators(p)
    x1, x2 = ops.x1.dense(), ops.x2.dense()
    np.testing.assert_allclose(x1 @ x1 + x2 @ x2, np.diag(circle_x_squared(p)), atol=1e-14)


@pytest.mark.parametrize("lam", [1, 2, 5, 12])
def test_algebra_residuals_vanish(lam):
    res = circle_algebra_residuals(make_params(lam))
    assert max(res.values()) <= 1e-10, res


@given(st.integers(1, 8), st.floats(1.0, 1e4))
def test_algebra_any_admissible_k(lam, factor):
    res = circle_algebra_residuals(make_params(lam, k_floor(lam) * factor))
    assert max(res.values()) <= 1e-10


def test_rejects_sphere_params():
    with pytest.raises(ValueError):
        build_x1(make_params(2, kind="sphere"))
