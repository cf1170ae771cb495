"""Analytical reference solutions: Bessel functions, sphere series, statics, lumped resonator."""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import scipy.special as ss
from hypothesis import given
from hypothesis import strategies as st

import nsbem.oracles as oracles
from nsbem.errors import ConfigError, SeriesConvergenceError
from nsbem.oracles import (
    SeriesConfig,
    conducting_sphere_field,
    conducting_sphere_surface_normal,
    dielectric_sphere_field,
    mie_dielectric,
    mie_pec,
    resonator_ka,
    rigid_sphere_scatter,
    spherical_hn,
    spherical_jn,
    spherical_yn,
)
from nsbem.oracles.bessel import derivative, riccati_derivative

# ---------------------------------------------------------------- brute-force Bessel reference


def _double_factorial_odd(m: int) -> Fraction:
    """``(2m - 1)!!`` for any integer ``m``, extended to negative ``m`` by the recurrence."""
    value = Fraction(1)
    if m >= 0:
        for j in range(1, m + 1):
            value *= 2 * j - 1
    else:
        for j in range(0, m, -1):
            value /= 2 * j - 1
    return value


def _series(order: int, x: Fraction, terms: int = 80) -> Fraction:
    """``x^order sum_k (-x^2/2)^k / (k! (2 order + 2k + 1)!!)`` in exact arithmetic."""
    total = Fraction(0)
    term_x = Fraction(1)
    fact = 1
    for k in range(terms):
        if k:
            term_x *= -x * x / 2
            fact *= k
        total += term_x / (fact * _double_factorial_odd(order + k + 1))
    return total * x**order if order >= 0 else total / x ** (-order)


def _reference_jn(n: int, x: Fraction) -> float:
    return float(_series(n, x))


def _reference_yn(n: int, x: Fraction) -> float:
    # y_n = (-1)^(n+1) j_{-n-1}
    return float((-1) ** (n + 1) * _series(-n - 1, x))


@pytest.mark.parametrize("n", [0, 1, 5])
@pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(16, 5)])
def test_bessel_against_power_series(n, x):
    xf = float(x)
    j = spherical_jn(5, xf)[n].real
    y = spherical_yn(5, xf)[n].real
    ref_j, ref_y = _reference_jn(n, x), _reference_yn(n, x)
    assert abs(j - ref_j) <= 1e-10 * abs(ref_j)
    assert abs(y - ref_y) <= 1e-10 * abs(ref_y)


def test_power_series_reference_is_sound():
    # the reference itself reproduces the closed forms
    assert _reference_jn(0, Fraction(1, 2)) == pytest.approx(math.sin(0.5) / 0.5, rel=1e-15)
    assert _reference_yn(0, Fraction(1, 2)) == pytest.approx(-math.cos(0.5) / 0.5, rel=1e-15)


@given(st.floats(0.05, 60.0))
def test_bessel_against_scipy(x):
    n = np.arange(0, 40)
    j = spherical_jn(39, x).real
    ref = ss.spherical_jn(n, x)
    err = np.abs(j - ref)
    # relative accuracy where j_n decays monotonically (x < n, below the first zero),
    # accuracy against the envelope in the oscillatory range, where j_n has zeros
    decaying = n > x
    assert np.all(err[decaying] <= 1e-11 * np.abs(ref[decaying]))
    assert np.all(err[~decaying] <= 1e-13 * np.max(np.abs(ref)))
    y = spherical_yn(10, x).real
    ref_y = ss.spherical_yn(np.arange(11), x)
    assert np.allclose(y, ref_y, rtol=1e-11, atol=0)


@pytest.mark.parametrize("x", [math.pi, 2 * math.pi, 4.4934094579])
def test_bessel_at_zeros_of_low_orders(x):
    # Miller normalisation must not divide by a vanishing j_0 or j_1
    assert np.allclose(spherical_jn(8, x).real, ss.spherical_jn(np.arange(9), x), atol=1e-14)


def test_bessel_complex_argument():
    z = 1.3 + 0.4j
    assert np.allclose(spherical_jn(6, z), ss.spherical_jn(np.arange(7), z), rtol=1e-12)


def test_bessel_derivatives():
    x = 2.7
    vals = spherical_hn(7, x)
    d = derivative(vals, x)
    ref = ss.spherical_jn(np.arange(7), x, True) + 1j * ss.spherical_yn(np.arange(7), x, True)
    assert np.allclose(d, ref, rtol=1e-12)
    rd = riccati_derivative(vals, x)
    assert np.allclose(rd, vals[:-1] + x * ref, rtol=1e-12)


def test_bessel_rejects_zero():
    with pytest.raises(ValueError):
        spherical_jn(3, 0.0)


# ---------------------------------------------------------------- rigid sphere


def test_rigid_sphere_rayleigh_dipole():
    # near zone at ka = 1e-4: the dipole term i k a^3 cos(theta) / (2 r^2) dominates
    ka, r = 1e-4, 2.0
    for theta in (0.0, 0.7):
        phi = rigid_sphere_scatter(ka, r, theta)
        dipole = 1j * ka * math.cos(theta) / (2 * r * r)
        assert abs(phi - dipole) < 1e-3 * abs(dipole) + 1e-9
    assert abs(rigid_sphere_scatter(ka, r, 0.0)) == pytest.approx(1.25e-5, rel=1e-3)


def test_rigid_sphere_truncation_invariance():
    ka = 1.01 * math.pi
    a = rigid_sphere_scatter(ka, 1.2, np.linspace(0, math.pi, 7), SeriesConfig(max_terms=40))
    b = rigid_sphere_scatter(ka, 1.2, np.linspace(0, math.pi, 7), SeriesConfig(max_terms=60))
    assert np.max(np.abs(a - b)) < 1e-12


@given(st.floats(0.1, 10.0), st.floats(1.0, 5.0), st.floats(0.0, math.pi))
def test_rigid_sphere_axisymmetric(ka, r, theta):
    assert rigid_sphere_scatter(ka, r, theta) == rigid_sphere_scatter(ka, r, -theta)


def test_rigid_sphere_hard_boundary():
    # d(phi_inc + phi_sc)/dr vanishes on r = a
    ka, h = 2.0, 1e-6
    theta = np.linspace(0.1, 3.0, 5)
    def total(r):
        return rigid_sphere_scatter(ka, r, theta) + np.exp(1j * ka * r * np.cos(theta))
    dr = (total(1 + 2 * h) - total(1.0)) / (2 * h) * 0 + (
        -3 * total(1.0) + 4 * total(1 + h) - total(1 + 2 * h)
    ) / (2 * h)
    assert np.max(np.abs(dr)) < 1e-4


def test_rigid_sphere_errors():
    with pytest.raises(ValueError):
        rigid_sphere_scatter(1.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        rigid_sphere_scatter(-1.0, 1.5, 0.0)
    with pytest.raises(ConfigError):
        rigid_sphere_scatter(30.0, 1.5, 0.0, SeriesConfig(max_terms=40))
    with pytest.raises(SeriesConvergenceError):
        rigid_sphere_scatter(5.0, 1.2, 0.3, SeriesConfig(max_terms=25, tolerance=1e-300))


# ---------------------------------------------------------------- PEC Mie


def test_mie_pec_boundary_condition():
    normals = np.array([[0.6, 0.0, 0.8], [0.0, 0.6, 0.8], [0.48, -0.6, -0.64]])
    e_sc = mie_pec(1.3, normals)
    e_tot = e_sc + np.exp(1j * 1.3 * normals[:, 2])[:, None] * np.array([1.0, 0, 0])
    tangential = e_tot - np.einsum("ij,ij->i", e_tot, normals)[:, None] * normals
    assert np.max(np.abs(tangential)) < 1e-12


def test_mie_pec_radial_component_decays_faster():
    # E_r / |E| falls like 1/(k r) in the radiation zone
    d = np.array([0.3, 0.4, math.sqrt(0.75)])
    ratios = []
    for r in (100.0, 1000.0):
        e = mie_pec(1.0, [r * d])[0]
        ratios.append(abs(e @ d) / np.linalg.norm(e))
    assert ratios[0] < 2e-2
    assert ratios[1] == pytest.approx(ratios[0] / 10, rel=0.02)


def test_mie_pec_mirror_symmetry():
    pts = np.array([[0.7, 1.1, 1.5]])
    mags = [
        np.linalg.norm(mie_pec(1.0, pts * np.array(s)), axis=1)[0]
        for s in ((1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1))
    ]
    assert np.allclose(mags, mags[0], rtol=1e-12)


def test_mie_pec_static_limit():
    pts = np.array([[0.0, 0.0, 2.0], [1.2, 0.4, -1.1], [0.3, -2.0, 0.5]])
    e0 = np.array([1.0, 0.0, 0.0])
    ref = conducting_sphere_field(pts, e0)
    tiny = mie_pec(1e-5, pts)
    assert np.max(np.linalg.norm(tiny - ref, axis=1)) < 1e-4 * np.max(np.linalg.norm(ref, axis=1))
    small = mie_pec(1e-3, pts)
    assert np.max(np.linalg.norm(small - ref, axis=1)) < 2e-3 * np.max(np.linalg.norm(ref, axis=1))


def test_mie_pec_rotation_covariance():
    # rotating the polarisation about the propagation axis rotates the field
    pts = np.array([[0.5, 1.0, 1.5], [-1.2, 0.3, 0.2]])
    rot = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    e_x = mie_pec(1.0, pts @ rot, polarization=(1, 0, 0))
    e_y = mie_pec(1.0, pts, polarization=(0, 1, 0))
    assert np.allclose(e_y, e_x @ rot.T, atol=1e-13)


def test_mie_pec_rejects_bad_input():
    with pytest.raises(ValueError):
        mie_pec(1.0, [[0.0, 0.0, 0.5]])
    with pytest.raises(ValueError):
        mie_pec(1.0, [[0.0, 0.0, 2.0]], direction=(0, 0, 1), polarization=(0, 0.6, 0.8))


# ---------------------------------------------------------------- dielectric Mie


def test_mie_dielectric_transparency():
    out = mie_dielectric(1.0, 1.0, [[0.0, 0.0, 2.0], [1.0, 1.0, 1.0]])
    assert np.max(np.abs(out)) == 0.0
    inside = np.array([[0.1, 0.2, 0.3]])
    e = mie_dielectric(1.0, 1.0, inside)
    assert np.allclose(e, np.exp(1j * 0.3) * np.array([[1.0, 0, 0]]), atol=1e-14)


def test_mie_dielectric_static_interior():
    e = mie_dielectric(1e-4, math.sqrt(2.0), [[0.1, 0.2, 0.3], [-0.4, 0.1, 0.0]])
    assert np.allclose(e, [[0.75, 0, 0]] * 2, atol=1e-4)


def test_mie_dielectric_interface_conditions():
    m = 1.25
    x = np.array([0.6, 0.0, 0.8])
    h = 1e-9
    out = mie_dielectric(1.0, m, [x * (1 + h)])[0] + np.exp(1j * 0.8 * (1 + h)) * np.array([1, 0, 0])
    inn = mie_dielectric(1.0, m, [x * (1 - h)])[0]
    jump = out - inn
    assert np.linalg.norm(jump - (jump @ x) * x) < 1e-7
    assert abs(out @ x - m**2 * (inn @ x)) < 1e-7


def test_mie_dielectric_truncation_invariance():
    pts = [[0.0, 0.0, 2.0], [0.3, 0.1, 0.2]]
    a = mie_dielectric(2.0, 1.3, pts, config=SeriesConfig(max_terms=40))
    b = mie_dielectric(2.0, 1.3, pts, config=SeriesConfig(max_terms=80))
    assert np.max(np.abs(a - b)) < 1e-12


# ---------------------------------------------------------------- statics


def test_conducting_sphere_statics():
    normals = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    e0 = np.array([0.0, 0.0, 2.0])
    assert np.allclose(conducting_sphere_surface_normal(normals, e0), [4.0, 0.0])
    # total normal field 3 e0.n on the surface
    total = conducting_sphere_field(normals, e0) + e0
    assert np.allclose(np.einsum("ij,ij->i", total, normals), 3 * normals @ e0)


def test_dielectric_sphere_statics():
    e0 = np.array([1.0, 0.0, 0.0])
    inside = dielectric_sphere_field([[0.1, 0.0, 0.2]], e0, 2.0)
    assert np.allclose(inside, [[0.75, 0.0, 0.0]])
    far = dielectric_sphere_field([[0.0, 0.0, 10.0]], e0, 1.0)
    assert np.allclose(far, 0.0)


# ---------------------------------------------------------------- lumped resonator


def _resonator_geometry(a=1.0):
    return a, math.pi * (0.162 * a) ** 2, 4 / 3 * math.pi * (0.92 * a) ** 3, 0.67 * a


def test_resonator_formula_value():
    # a sqrt(A / (V L)) with the stated dimensions evaluates to 0.19423
    assert resonator_ka(*_resonator_geometry()) == pytest.approx(0.19423, abs=1e-5)


@pytest.mark.xfail(strict=True, reason="the stated geometry gives 0.194, not the quoted 0.208")
def test_resonator_formula_quoted_value():
    assert resonator_ka(*_resonator_geometry()) == pytest.approx(0.208, abs=5e-3)


@given(st.floats(0.01, 100.0))
def test_resonator_scale_invariance(a):
    assert resonator_ka(*_resonator_geometry(a)) == pytest.approx(resonator_ka(*_resonator_geometry()), rel=1e-12)


def test_resonator_zero_area():
    assert resonator_ka(1.0, 0.0, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        resonator_ka(1.0, 1.0, 0.0, 1.0)


# ---------------------------------------------------------------- independence


def test_oracles_do_not_import_solver_code():
    forbidden = {"kernels", "assembly", "acoustics", "electromagnetics", "geometry"}
    for path in Path(oracles.__file__).parent.glob("*.py"):
        tree = ast.parse(path.read_text())
        for node in ast.walk(tree):
            if isinstance(node, ast.ImportFrom):
                parts = set((node.module or "").split("."))
                assert not parts & forbidden, f"{path.name} imports {node.module}"
