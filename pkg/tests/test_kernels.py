"""Green's functions, their normal derivatives and regularised differences."""

from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nsbem.errors import KernelDomainError
from nsbem.kernels import (
    SERIES_SWITCH,
    d2_coefficients,
    delta_g,
    eval_kernels,
    expm1c,
    regularized_limit,
)

EZ = np.array([0.0, 0.0, 1.0])
EX = np.array([1.0, 0.0, 0.0])

finite = st.floats(-2.0, 2.0, allow_nan=False)
points = st.tuples(finite, finite, finite).map(np.array)
wavenumbers = st.floats(0.0, 10.0)


def unit(v):
    return np.asarray(v, float) / np.linalg.norm(v)


def test_unit_distance_static():
    ev = eval_kernels([1.0, 0, 0], [0, 0, 0], 0.0, EX, EX)
    assert ev.g_k == 1.0 and ev.g_0 == 1.0


def test_static_kernel_equals_laplace():
    ev = eval_kernels([0.3, -0.2, 0.9], [0.1, 0.0, 0.0], 0.0, EZ, EX)
    assert ev.g_k == ev.g_0
    assert ev.dgk_dn == ev.dg0_dn
    assert ev.d2_diff == 0


@given(points, points, wavenumbers)
def test_modulus_is_inverse_distance(x, x0, k):
    r = np.linalg.norm(x - x0)
    if r < 1e-6:
        return
    assert abs(eval_kernels(x, x0, k, EZ, EZ).g_k) == pytest.approx(1.0 / r, rel=1e-12)


@given(points, points, st.complex_numbers(max_magnitude=10.0))
def test_symmetry(x, x0, k):
    if np.linalg.norm(x - x0) < 1e-6:
        return
    assert eval_kernels(x, x0, k, EZ, EZ).g_k == eval_kernels(x0, x, k, EZ, EZ).g_k


@given(points, points, wavenumbers)
def test_source_derivative_sign(x, x0, k):
    if np.linalg.norm(x - x0) < 1e-6:
        return
    ev = eval_kernels(x, x0, k, EZ, EZ)
    assert ev.dgk_dn0 == pytest.approx(-ev.dgk_dn, rel=1e-12, abs=1e-300)


def test_normal_derivative_finite_difference():
    x0 = np.zeros(3)
    n = unit([1.0, 2.0, -1.0])
    x = 0.5 * n
    k, h = 2.0, 1e-5
    ev = eval_kernels(x, x0, k, n, n)
    fd = (eval_kernels(x + h * n, x0, k, n, n).g_k - eval_kernels(x - h * n, x0, k, n, n).g_k) / (
        2 * h
    )
    assert abs(ev.dgk_dn - fd) / abs(fd) < 1e-8


def test_second_derivative_difference_finite_difference():
    x = np.array([0.4, 0.3, 0.5])
    x0 = np.array([0.0, -0.1, 0.2])
    n, n0 = unit([1, 0.5, 0.2]), unit([-0.3, 1.0, 0.4])
    k, h = 1.7, 1e-5

    def dn(y0, kk):
        return eval_kernels(x, y0, kk, n, n0).dgk_dn

    def fd(kk):
        return (dn(x0 + h * n0, kk) - dn(x0 - h * n0, kk)) / (2 * h)

    expected = fd(k) - fd(0.0)
    got = eval_kernels(x, x0, k, n, n0).d2_diff
    assert abs(got - expected) / abs(expected) < 1e-6


def test_coincident_points_raise():
    with pytest.raises(KernelDomainError):
        eval_kernels([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 1.0, EZ, EZ)


def test_complex_wavenumber():
    k = 1.0 + 0.5j
    ev = eval_kernels([1.0, 0, 0], [0, 0, 0], k, EX, EX)
    assert ev.g_k == pytest.approx(cmath.exp(1j * k))


def test_regularized_limit_values():
    zero = regularized_limit(0.0, EZ, EZ)
    assert zero.delta_g == 0 and zero.dg_diff == 0 and zero.d2_coeff == 0
    assert regularized_limit(2.0, EZ, EZ).delta_g == 2j
    assert regularized_limit(1.0, EZ, EZ).d2_coeff == 0.5
    assert regularized_limit(1.0, EZ, EX).d2_coeff == 0.0


@pytest.mark.parametrize("r", [1e-2, 1e-3, 1e-4])
def test_delta_g_tends_to_ik(r):
    k = 2.0
    assert abs(delta_g(k, r) - 2j) < 3 * k * k * r


def test_d2_limit_times_r():
    k = 1.0
    vals = [
        r * eval_kernels(r * EX, np.zeros(3), k, EZ, EZ).d2_diff for r in (1e-2, 1e-3, 1e-4)
    ]
    assert abs(vals[-1] - 0.5) < 1e-3


@given(st.floats(1e-6, 1e-1), st.floats(0.1, 3.0))
def test_taylor_consistency(r, k):
    ev = eval_kernels(r * EX, np.zeros(3), k, EZ, EZ)
    leading = 0.5 * k * k / r
    assert abs(ev.d2_diff - leading) / leading < 10 * k * r


@pytest.mark.parametrize("angle", np.linspace(0.0, 2 * np.pi, 9))
def test_series_and_direct_agree_at_switch(angle):
    z = SERIES_SWITCH * np.exp(1j * angle)
    a_s, b_s = d2_coefficients(z, True)
    a_d, b_d = d2_coefficients(z, False)
    assert abs(a_s - a_d) / abs(a_s) < 1e-10
    assert abs(b_s - b_d) / abs(b_s) < 1e-10


@given(st.complex_numbers(max_magnitude=5.0))
def test_expm1c_matches_exp(z):
    assert expm1c(z) == pytest.approx(cmath.exp(z) - 1.0, rel=1e-12, abs=1e-15)


def test_expm1c_small_argument():
    z = 1e-12 + 1e-12j
    assert abs(expm1c(z) - z) < 1e-23
