"""Partial-wave series for scattering by a sphere.

Time dependence ``exp(-i omega t)`` throughout.  These routines share no
code with the boundary element implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, SeriesConvergenceError
from .bessel import derivative, riccati_derivative, spherical_hn, spherical_jn


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation control for the partial-wave sums.

    Attributes
    ----------
    max_terms : int
        Term budget; must be at least ``ceil(ka) + 20``.
    tolerance : float
        A sum stops once three consecutive terms fall below
        ``tolerance * |partial sum|``.
    """

    max_terms: int = 120
    tolerance: float = 1e-15

    def check(self, ka: float) -> None:
        need = math.ceil(abs(ka)) + 20
        if self.max_terms < need:
            raise ConfigError(f"max_terms={self.max_terms} is below ceil(ka) + 20 = {need}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")


class _Accumulator:
    """Sum series terms with the shared stopping rule."""

    def __init__(self, config: SeriesConfig, n_min: int):
        self.config = config
        self.n_min = n_min
        self.quiet = 0
        self.total = None

    def add(self, n: int, term: np.ndarray) -> bool:
        """Add ``term``; return True once the sum has converged."""
        self.total = term.copy() if self.total is None else self.total + term
        scale = np.max(np.abs(self.total))
        small = np.max(np.abs(term)) <= self.config.tolerance * scale
        self.quiet = self.quiet + 1 if small else 0
        return n >= self.n_min and self.quiet >= 3


def _finish(acc: _Accumulator, converged: bool, what: str):
    if not converged:
        raise SeriesConvergenceError(
            f"{what}: no convergence within {acc.config.max_terms} terms"
        )
    return acc.total


def _legendre(n_max: int, mu: np.ndarray) -> np.ndarray:
    P = np.empty((n_max + 1,) + mu.shape)
    P[0] = 1.0
    if n_max >= 1:
        P[1] = mu
    for n in range(2, n_max + 1):
        P[n] = ((2 * n - 1) * mu * P[n - 1] - (n - 1) * P[n - 2]) / n
    return P


def rigid_sphere_scatter(
    ka: float,
    r_over_a: np.ndarray | float,
    theta: np.ndarray | float,
    config: SeriesConfig = SeriesConfig(),
) -> np.ndarray:
    """Field scattered by a sound-hard sphere of radius ``a``.

    The incident wave is ``exp(i k z)`` with unit amplitude; ``theta`` is
    measured from its propagation direction.  The scattered potential is
    ``-sum i^n (2n+1) j_n'(ka)/h_n'(ka) h_n(kr) P_n(cos theta)``.

    Parameters
    ----------
    ka : float
        Positive size parameter.
    r_over_a : float or ndarray
        Radial distance in units of ``a`` (at least 1).
    theta : float or ndarray
        Polar angle(s) in radians; broadcast against ``r_over_a``.

    Raises
    ------
    SeriesConvergenceError

    Examples
    --------
    In the long-wave limit the near field is the dipole
    ``i k a^3 cos(theta) / (2 r^2)``:

    >>> phi = rigid_sphere_scatter(1e-4, 2.0, 0.0)
    >>> bool(abs(phi - 1.25e-5j) < 1e-8)
    True
    """
    if not ka > 0:
        raise ValueError("ka must be positive")
    r, th = np.broadcast_arrays(np.asarray(r_over_a, float), np.asarray(theta, float))
    if np.any(r < 1.0):
        raise ValueError("r/a must be at least 1")
    config.check(ka)
    nt = config.max_terms
    kr = ka * r
    jka = spherical_jn(nt + 1, ka)
    hka = spherical_hn(nt + 1, ka)
    with np.errstate(all="ignore"):
        djka = derivative(jka, ka)
        dhka = derivative(hka, ka)
    with np.errstate(over="ignore", invalid="ignore"):
        hkr = spherical_hn(nt, kr)
    P = _legendre(nt, np.cos(th))
    acc = _Accumulator(config, math.ceil(ka) + 2)
    converged = False
    for n in range(nt):
        with np.errstate(all="ignore"):
            coeff = -(1j**n) * (2 * n + 1) * djka[n] / dhka[n]
            term = coeff * hkr[n] * P[n]
        converged = acc.add(n, term)
        if converged:
            break
    return _finish(acc, converged, "rigid_sphere_scatter")


def rigid_sphere_surface_static(ka: float, theta: np.ndarray | float) -> np.ndarray:
    """Leading low-frequency surface field of a hard sphere.

    For ``ka -> 0`` the incident wave is ``1 + i k z`` and the scattered
    potential is the dipole ``i k a^3 cos(theta) / (2 r^2)``; on ``r = a``
    this is ``i ka cos(theta) / 2``.
    """
    return 0.5j * ka * np.cos(np.asarray(theta, float))


def _local_frame(direction, polarization):
    d = np.asarray(direction, float)
    p = np.asarray(polarization, float)
    if abs(np.linalg.norm(d) - 1) > 1e-12 or abs(np.linalg.norm(p) - 1) > 1e-12:
        raise ValueError("direction and polarization must be unit vectors")
    if abs(d @ p) > 1e-12:
        raise ValueError("polarization must be orthogonal to direction")
    # rows: local x (polarization), y, z (propagation)
    return np.stack([p, np.cross(d, p), d])


def _angular(n_max: int, mu: np.ndarray):
    pi = np.zeros((n_max + 1,) + mu.shape)
    tau = np.zeros_like(pi)
    if n_max >= 1:
        pi[1] = 1.0
    for n in range(2, n_max + 1):
        pi[n] = (2 * n - 1) / (n - 1) * mu * pi[n - 1] - n / (n - 1) * pi[n - 2]
    for n in range(1, n_max + 1):
        tau[n] = n * mu * pi[n] - (n + 1) * pi[n - 1]
    return pi, tau


def _vsh_sum(coef_a, coef_b, radial, dradial, rho, theta, phi, config, n_min, what, inner=False):
    """Sum ``E_n (i a_n N_e1n - b_n M_o1n)`` (or the interior form).

    ``radial[n] = z_n(rho)`` and ``dradial[n] = [rho z_n(rho)]'``.  For
    ``inner`` the combination is ``E_n (c_n M_o1n - i d_n N_e1n)`` with
    ``coef_a = c_n`` and ``coef_b = d_n``.  Returns spherical components
    ``(E_r, E_theta, E_phi)`` stacked on the last axis.
    """
    mu = np.cos(theta)
    st = np.sin(theta)
    cp, sp_ = np.cos(phi), np.sin(phi)
    nt = len(coef_a)
    pi, tau = _angular(nt, mu)
    acc = _Accumulator(config, n_min)
    converged = False
    for n in range(1, nt):
        En = 1j**n * (2 * n + 1) / (n * (n + 1))
        z = radial[n]
        with np.errstate(all="ignore"):
            dz = dradial[n] / rho
        # M_o1n and N_e1n with the radial function z_n
        m_th = cp * pi[n] * z
        m_ph = -sp_ * tau[n] * z
        n_r = cp * n * (n + 1) * st * pi[n] * z / rho
        n_th = cp * tau[n] * dz
        n_ph = -sp_ * pi[n] * dz
        if inner:
            c, d = coef_a[n], coef_b[n]
            term = np.stack(
                [-1j * d * n_r, c * m_th - 1j * d * n_th, c * m_ph - 1j * d * n_ph], axis=-1
            )
        else:
            a, b = coef_a[n], coef_b[n]
            term = np.stack(
                [1j * a * n_r, 1j * a * n_th - b * m_th, 1j * a * n_ph - b * m_ph], axis=-1
            )
        with np.errstate(all="ignore"):
            term = En * term
        converged = acc.add(n, term)
        if converged:
            break
    return _finish(acc, converged, what)


def _to_cartesian(points, frame, a, evaluate):
    pts = np.atleast_2d(np.asarray(points, float))
    loc = pts @ frame.T / a
    r = np.linalg.norm(loc, axis=1)
    theta = np.arccos(np.clip(loc[:, 2] / r, -1.0, 1.0))
    phi = np.arctan2(loc[:, 1], loc[:, 0])
    sph = evaluate(r, theta, phi)
    st, ct, sp_, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    er = np.stack([st * cp, st * sp_, ct], axis=-1)
    eth = np.stack([ct * cp, ct * sp_, -st], axis=-1)
    eph = np.stack([-sp_, cp, np.zeros_like(cp)], axis=-1)
    local = sph[:, :1] * er + sph[:, 1:2] * eth + sph[:, 2:3] * eph
    out = local @ frame
    return out[0] if np.ndim(points) == 1 else out


def mie_pec(
    ka: float,
    points,
    direction=(0.0, 0.0, 1.0),
    polarization=(1.0, 0.0, 0.0),
    radius: float = 1.0,
    config: SeriesConfig = SeriesConfig(),
) -> np.ndarray:
    """Electric field scattered by a perfectly conducting sphere.

    The sphere of radius ``radius`` is centred at the origin and the
    incident field is ``polarization * exp(i k direction . x)``.  The
    coefficients are ``a_n = [x j_n]'/[x h_n]'`` and ``b_n = j_n / h_n``
    with ``x = ka``.

    Parameters
    ----------
    points : array_like (3,) or (P, 3)
        Points with ``|x| >= radius``.

    Returns
    -------
    ndarray (3,) or (P, 3), complex
    """
    if not ka > 0:
        raise ValueError("ka must be positive")
    config.check(ka)
    frame = _local_frame(direction, polarization)
    nt = config.max_terms
    j = spherical_jn(nt + 1, ka)
    h = spherical_hn(nt + 1, ka)
    with np.errstate(all="ignore"):
        a_n = riccati_derivative(j, ka) / riccati_derivative(h, ka)
        b_n = j[:-1] / h[:-1]

    def evaluate(r, theta, phi):
        if np.any(r < 1.0 - 1e-12):
            raise ValueError("mie_pec points must lie outside the sphere")
        rho = ka * r
        with np.errstate(over="ignore", invalid="ignore"):
            hr = spherical_hn(nt + 1, rho)
            dhr = riccati_derivative(hr, rho)
        return _vsh_sum(a_n, b_n, hr[:-1], dhr, rho, theta, phi, config,
                        math.ceil(ka) + 2, "mie_pec")

    return _to_cartesian(points, frame, radius, evaluate)


def _dielectric_coefficients(x, m, nt):
    with np.errstate(all="ignore"):
        return _dielectric_coefficients_raw(x, m, nt)


def _dielectric_coefficients_raw(x, m, nt):
    mx = m * x
    jx = spherical_jn(nt + 1, x)
    hx = spherical_hn(nt + 1, x)
    jmx = spherical_jn(nt + 1, mx)
    psi_x, dpsi_x = x * jx[:-1], riccati_derivative(jx, x)
    xi_x, dxi_x = x * hx[:-1], riccati_derivative(hx, x)
    psi_mx, dpsi_mx = mx * jmx[:-1], riccati_derivative(jmx, mx)
    a_n = (m * psi_mx * dpsi_x - psi_x * dpsi_mx) / (m * psi_mx * dxi_x - xi_x * dpsi_mx)
    b_n = (psi_mx * dpsi_x - m * psi_x * dpsi_mx) / (psi_mx * dxi_x - m * xi_x * dpsi_mx)
    wr = psi_x * dxi_x - xi_x * dpsi_x
    c_n = m * wr / (psi_mx * dxi_x - m * xi_x * dpsi_mx)
    d_n = m * wr / (m * psi_mx * dxi_x - xi_x * dpsi_mx)
    return a_n, b_n, c_n, d_n


def mie_dielectric(
    ka: float,
    index_ratio: float,
    points,
    direction=(0.0, 0.0, 1.0),
    polarization=(1.0, 0.0, 0.0),
    radius: float = 1.0,
    config: SeriesConfig = SeriesConfig(),
) -> np.ndarray:
    """Field of a homogeneous dielectric sphere with equal permeabilities.

    Parameters
    ----------
    ka : float
        Exterior size parameter ``k_out a``.
    index_ratio : float
        ``m = k_in / k_out``; the permittivity ratio is ``m**2``.
    points : array_like (3,) or (P, 3)
        Points outside receive the scattered field, points inside
        (``|x| < radius``) the transmitted field.

    Returns
    -------
    ndarray (3,) or (P, 3), complex
    """
    if not ka > 0 or not index_ratio > 0:
        raise ValueError("ka and index_ratio must be positive")
    config.check(ka * max(1.0, index_ratio))
    frame = _local_frame(direction, polarization)
    nt = config.max_terms
    m = float(index_ratio)
    a_n, b_n, c_n, d_n = _dielectric_coefficients(ka, m, nt)
    n_min = math.ceil(ka * max(1.0, m)) + 2

    def evaluate(r, theta, phi):
        out = np.zeros((len(r), 3), dtype=complex)
        inside = r < 1.0
        if m == 1.0:
            # transparent sphere: no scattering, transmitted field equals incident
            if np.any(inside):
                out[inside] = _incident_spherical(ka * r[inside], theta[inside], phi[inside])
            return out
        if np.any(~inside):
            rho = ka * r[~inside]
            with np.errstate(over="ignore", invalid="ignore"):
                hr = spherical_hn(nt + 1, rho)
                dhr = riccati_derivative(hr, rho)
            out[~inside] = _vsh_sum(a_n, b_n, hr[:-1], dhr, rho, theta[~inside], phi[~inside],
                                    config, n_min, "mie_dielectric")
        if np.any(inside):
            rho = m * ka * np.maximum(r[inside], 1e-12)
            jr = spherical_jn(nt + 1, rho)
            djr = riccati_derivative(jr, rho)
            out[inside] = _vsh_sum(c_n, d_n, jr[:-1], djr, rho, theta[inside], phi[inside],
                                   config, n_min, "mie_dielectric", inner=True)
        return out

    return _to_cartesian(points, frame, radius, evaluate)


def _incident_spherical(kz_r, theta, phi):
    """Incident ``x exp(i k z)`` in spherical components (local frame)."""
    e = np.exp(1j * kz_r * np.cos(theta))
    return np.stack(
        [np.sin(theta) * np.cos(phi) * e, np.cos(theta) * np.cos(phi) * e, -np.sin(phi) * e],
        axis=-1,
    )
