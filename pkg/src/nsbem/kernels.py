"""Helmholtz and Laplace Green's functions and their regularised differences.

With ``r = x - x0`` and ``R = |r|``::

    G_k = exp(ikR) / R                     G_0 = 1 / R
    dG_k/dn   = (ikR - 1) exp(ikR) (r.n)  / R^3
    dG_k/dn0  = (1 - ikR) exp(ikR) (r.n0) / R^3
    d2G_k/dn dn0 = exp(ikR)/R^3 * [-(ikR - 1)(n.n0)
                                    - (r.n0)(r.n)/R^2 (-(kR)^2 - 3ikR + 3)]

The differences ``G_k - G_0`` and ``d2G_k/dn dn0 - d2G_0/dn dn0`` lose all
significant digits to cancellation when ``|kR|`` is small, so below
``SERIES_SWITCH`` they are evaluated from their Taylor series in
``z = ikR``.  Above it they use a complex ``expm1`` that is itself free of
cancellation.  The wavenumber may be complex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import KernelDomainError

#: |kR| below which cancellation-prone differences switch to series.
SERIES_SWITCH = 1e-4
_SERIES_TERMS = 6


@njit(cache=True)
def expm1c(z):
    """``exp(z) - 1`` for complex ``z`` without cancellation near zero."""
    x = z.real
    y = z.imag
    s = math.sin(0.5 * y)
    re = math.expm1(x) * math.cos(y) - 2.0 * s * s
    im = math.exp(x) * math.sin(y)
    return complex(re, im)


@njit(cache=True)
def _series_a_b(z):
    # A(z) = (1 - z) e^z - 1 = sum_{m>=2} (1 - m) z^m / m!
    # B(z) = (z^2 - 3z + 3) e^z - 3 = sum_{m>=2} (m - 1)(m - 3) z^m / m!
    a = 0j
    b = 0j
    zm = z * z
    fact = 2.0
    for m in range(2, 2 + _SERIES_TERMS):
        a += (1.0 - m) * zm / fact
        b += (m - 1.0) * (m - 3.0) * zm / fact
        zm *= z
        fact *= m + 1.0
    return a, b


@njit(cache=True)
def _direct_a_b(z):
    e1 = expm1c(z)
    a = (e1 - z) - z * e1
    b = z * z - 3.0 * (z - e1) - 3.0 * z * e1 + z * z * e1
    return a, b


@njit(cache=True)
def d2_coefficients(z, use_series):
    """Cancellation-free ``A(z)``, ``B(z)`` of the d2-difference.

    ``d2G_k - d2G_0 = [(n.n0) A(z) - (r.n0)(r.n)/R^2 B(z)] / R^3``.
    """
    if use_series:
        return _series_a_b(z)
    return _direct_a_b(z)


@njit(cache=True)
def delta_g(k, R):
    """``G_k - G_0 = (exp(ikR) - 1) / R``."""
    z = 1j * k * R
    if abs(z) < SERIES_SWITCH:
        s = 0j
        zm = z
        fact = 1.0
        for m in range(1, 1 + _SERIES_TERMS):
            s += zm / fact
            zm *= z
            fact *= m + 1.0
        return s / R
    return expm1c(z) / R


@njit(cache=True)
def kernel_values(x, x0, k, n, n0):
    """All pointwise kernels at one pair of points (``R > 0`` assumed)."""
    rx = x[0] - x0[0]
    ry = x[1] - x0[1]
    rz = x[2] - x0[2]
    R2 = rx * rx + ry * ry + rz * rz
    R = math.sqrt(R2)
    rn = rx * n[0] + ry * n[1] + rz * n[2]
    rn0 = rx * n0[0] + ry * n0[1] + rz * n0[2]
    nn0 = n[0] * n0[0] + n[1] * n0[1] + n[2] * n0[2]
    z = 1j * k * R
    ez = cmath.exp(z)
    R3 = R2 * R
    gk = ez / R
    g0 = 1.0 / R
    dgk_dn = (z - 1.0) * ez * rn / R3
    dg0_dn = -rn / R3
    dgk_dn0 = (1.0 - z) * ez * rn0 / R3
    a, b = d2_coefficients(z, abs(z) < SERIES_SWITCH)
    d2 = (nn0 * a - rn0 * rn / R2 * b) / R3
    return gk, g0, dgk_dn, dg0_dn, d2, dgk_dn0


@dataclass(frozen=True)
class KernelEval:
    """Kernel values at one point pair.

    Attributes
    ----------
    g_k, g_0 : complex, float
        Helmholtz and Laplace Green's functions.
    dgk_dn, dg0_dn : complex, float
        Normal derivatives with respect to the integration point ``x``.
    d2_diff : complex
        ``d2G_k/dn dn0 - d2G_0/dn dn0``.
    dgk_dn0 : complex
        Derivative with respect to the collocation point along ``n0``.
    """

    g_k: complex
    g_0: float
    dgk_dn: complex
    dg0_dn: float
    d2_diff: complex
    dgk_dn0: complex


def eval_kernels(x, x0, k, n, n0) -> KernelEval:
    """Evaluate every kernel at integration point ``x`` and source ``x0``.

    Parameters
    ----------
    x, x0 : array_like (3,)
        Integration and collocation points.
    k : complex
        Wavenumber; real, imaginary or complex.
    n, n0 : array_like (3,)
        Unit normals at ``x`` and ``x0``.

    Raises
    ------
    KernelDomainError
        If ``x`` and ``x0`` coincide.
    """
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if not np.linalg.norm(x - x0) > 0.0:
        raise KernelDomainError("kernels are singular at r = 0; use regularized_limit")
    vals = kernel_values(
        x, x0, complex(k), np.asarray(n, dtype=float), np.asarray(n0, dtype=float)
    )
    gk, g0, dgk, dg0, d2, dgk0 = vals
    return KernelEval(complex(gk), float(g0), complex(dgk), float(dg0), complex(d2), complex(dgk0))


@dataclass(frozen=True)
class RegularizedLimit:
    """Coincident-point behaviour of the kernel differences.

    Attributes
    ----------
    delta_g : complex
        ``lim (G_k - G_0) = ik``.
    dg_diff : complex
        ``lim (dG_k/dn - dG_0/dn) = 0``; the bracket ``(ikR - 1) e^{ikR} + 1``
        vanishes like ``-(kR)^2 / 2`` while ``(r.n)/R^3`` grows like ``1/R``.
    d2_coeff : complex
        ``lim R (d2G_k - d2G_0) = k^2 / 2 (n.n0)``.
    """

    delta_g: complex
    dg_diff: complex
    d2_coeff: complex


def regularized_limit(k, n, n0) -> RegularizedLimit:
    """Limits of the kernel differences as ``x`` approaches ``x0``.

    Examples
    --------
    >>> regularized_limit(2.0, [0, 0, 1], [0, 0, 1]).delta_g
    2j
    """
    k = complex(k)
    nn0 = float(np.dot(np.asarray(n, float), np.asarray(n0, float)))
    return RegularizedLimit(1j * k, 0j, 0.5 * k * k * nn0)
