"""Field-only electromagnetic scattering by perfect conductors and dielectrics.

Each Cartesian component of the electric field solves a scalar Helmholtz
equation.  The three components are coupled on the surface through the
boundary conditions, written in the node frame ``(n, t1, t2)``, and
through the divergence-free condition.  For a field ``E`` with
body-outward normal ``n`` and total curvature ``kappa`` (positive on
convex parts),

    n . dE/dn = -kappa E_n - div_s E_t,

so on a perfect conductor, where ``E_t`` vanishes, the normal derivative
of the normal component is fixed by ``E_n`` alone.

Systems
-------
Perfect conductor (unknowns ``E_n``, ``t1 . dE/dn``, ``t2 . dE/dn``,
scattered field), one row block per Cartesian component ``alpha``::

    (H + G kappa) n_alpha E_n - G t1_alpha X1 - G t2_alpha X2 = C_alpha

Dielectric (unknowns ``E_n, E_t1, E_t2, n.dE/dn, t1.dE/dn, t2.dE/dn`` of
the scattered field): three exterior rows ``H E_alpha = G dE_alpha/dn``
and three interior rows obtained by substituting the interface
conditions into ``H_in E^tr_alpha = G_in dE^tr_alpha/dn``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .assembly import (
    MeshQuadrature,
    QuadratureConfig,
    TangentialOps,
    assemble,
    solve_dense,
    tangential_ops,
)
from .assembly.field import represent
from .errors import NsbemError
from .geometry.frames import NodeFrames
from .geometry.mesh import QuadMesh
from .geometry.proximity import SurfaceLocator

logger = logging.getLogger(__name__)


class MaterialError(NsbemError, ValueError):
    """Material parameters are invalid or mutually inconsistent."""


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError(f"{name} must be a unit 3-vector")
    return v


@dataclass(frozen=True, eq=False)
class EmIncident:
    """Plane wave ``amplitude * polarization * exp(i k d . x)`` sampled on a mesh.

    Attributes
    ----------
    k : float
        Exterior wavenumber.
    direction, polarization : ndarray (3,)
        Orthonormal propagation direction and electric polarization.
    amplitude : complex
    E, dE_dn : ndarray (N, 3), complex
        Cartesian field and its body-normal derivative at the nodes.
    local, dlocal : ndarray (N, 3), complex
        The same quantities projected on ``(n, t1, t2)``: columns are
        ``E_n, E_t1, E_t2`` and ``n.dE/dn, t1.dE/dn, t2.dE/dn``.
    mesh_fingerprint : str
    """

    k: float
    direction: np.ndarray
    polarization: np.ndarray
    amplitude: complex
    E: np.ndarray
    dE_dn: np.ndarray
    local: np.ndarray
    dlocal: np.ndarray
    mesh_fingerprint: str

    def evaluate(self, points) -> np.ndarray:
        """Incident field ``(P, 3)`` at arbitrary points."""
        pts = np.atleast_2d(np.asarray(points, float))
        phase = self.amplitude * np.exp(1j * self.k * (pts @ self.direction))
        return phase[:, None] * self.polarization[None, :]


def incident_em(
    k_out: float,
    direction,
    polarization,
    mesh: QuadMesh,
    frames: NodeFrames,
    amplitude: complex = 1.0,
) -> EmIncident:
    """Sample an electric plane wave and its normal derivative at the nodes.

    Parameters
    ----------
    k_out : float
        Exterior wavenumber, positive.
    direction, polarization : array_like (3,)
        Unit vectors with ``direction . polarization = 0``.
    amplitude : complex
        Scale factor; zero gives the null incident field.

    Examples
    --------
    >>> from nsbem.geometry import generate_sphere_mesh, node_frames
    >>> mesh = generate_sphere_mesh(1.0, 1)
    >>> inc = incident_em(1.0, [0, 0, 1], [1, 0, 0], mesh, node_frames(mesh))
    >>> bool(np.allclose(inc.evaluate([[0, 0, 0]]), [[1, 0, 0]]))
    True
    """
    d = _unit(direction, "direction")
    p = _unit(polarization, "polarization")
    if abs(d @ p) > 1e-12:
        raise ValueError("polarization must be orthogonal to direction")
    k = float(k_out)
    if not np.isfinite(k) or k <= 0:
        raise ValueError("k_out must be positive and finite")
    phase = complex(amplitude) * np.exp(1j * k * (mesh.nodes @ d))
    E = phase[:, None] * p[None, :]
    dE = (1j * k * (frames.normal @ d) * phase)[:, None] * p[None, :]
    return EmIncident(
        k, d, p, complex(amplitude), E, dE, frames.to_local(E), frames.to_local(dE),
        mesh.fingerprint,
    )


@dataclass(frozen=True, eq=False)
class PecSolution:
    """Scattered field of a perfectly conducting body.

    Attributes
    ----------
    En, X1, X2 : ndarray (N,)
        System unknowns: scattered ``E_n`` and ``t1 . dE/dn``, ``t2 . dE/dn``.
    E, dE_dn : ndarray (N, 3)
        Reconstructed Cartesian scattered field and normal derivative.
    incident : EmIncident
    residual, condition : float
        Relative residual and condition estimate of the dense solve.
    mesh_fingerprint : str
    timings : dict
    """

    En: np.ndarray
    X1: np.ndarray
    X2: np.ndarray
    E: np.ndarray
    dE_dn: np.ndarray
    incident: EmIncident
    residual: float
    condition: float
    mesh_fingerprint: str
    timings: dict = field(default_factory=dict)

    @property
    def k(self) -> float:
        return self.incident.k


@dataclass(frozen=True, eq=False)
class DielectricSolution:
    """Scattered and transmitted fields of a dielectric body.

    Attributes
    ----------
    unknowns : ndarray (N, 6)
        Scattered ``E_n, E_t1, E_t2, n.dE/dn, t1.dE/dn, t2.dE/dn``.
    E, dE_dn : ndarray (N, 3)
        Cartesian scattered field and normal derivative (outside).
    E_tr, dE_tr_dn : ndarray (N, 3)
        Cartesian transmitted field and normal derivative (inside).
    eps_ratio : float
        ``eps_in / eps_out``; permeabilities are equal.
    k_in : complex
    incident : EmIncident
    residual, condition : float
    mesh_fingerprint : str
    timings : dict
    """

    unknowns: np.ndarray
    E: np.ndarray
    dE_dn: np.ndarray
    E_tr: np.ndarray
    dE_tr_dn: np.ndarray
    eps_ratio: float
    k_in: complex
    incident: EmIncident
    residual: float
    condition: float
    mesh_fingerprint: str
    timings: dict = field(default_factory=dict)

    @property
    def k(self) -> float:
        return self.incident.k


EmSolution = Union[PecSolution, DielectricSolution]


def _check(mesh: QuadMesh, frames: NodeFrames, incident: EmIncident) -> None:
    if frames.mesh_fingerprint and frames.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("frames were computed for a different mesh")
    if incident.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("incident field was sampled on a different mesh")


def _columns(frames: NodeFrames):
    """``(n, t1, t2)`` as a list of ``(N, 3)`` arrays."""
    return [frames.normal, frames.t1, frames.t2]


def solve_pec(
    mesh: QuadMesh,
    frames: NodeFrames,
    incident: EmIncident,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
) -> PecSolution:
    """Scattering by a perfect electric conductor.

    The tangential scattered field equals minus the tangential incident
    field.  The normal derivative of the normal component follows from
    the divergence condition, which leaves ``3N`` unknowns.

    Returns
    -------
    PecSolution
    """
    _check(mesh, frames, incident)
    n = mesh.n_nodes
    t0 = time.perf_counter()
    mats = assemble(mesh, frames, incident.k, True, quadrature)
    H, G = mats.H, mats.G
    kappa = frames.kappa
    En_i, Et1_i, Et2_i = incident.local.T
    dEn_i = incident.dlocal[:, 0]
    nrm, t1, t2 = _columns(frames)
    A = np.empty((3 * n, 3 * n), dtype=complex)
    B = np.empty(3 * n, dtype=complex)
    HK = H + G * kappa[None, :]
    for a in range(3):
        rows = slice(a * n, (a + 1) * n)
        A[rows, 0:n] = HK * nrm[:, a][None, :]
        A[rows, n:2 * n] = G * (-t1[:, a])[None, :]
        A[rows, 2 * n:] = G * (-t2[:, a])[None, :]
        B[rows] = H @ (t1[:, a] * Et1_i + t2[:, a] * Et2_i) - G @ (
            nrm[:, a] * (kappa * En_i + dEn_i)
        )
    del HK, H, G, mats
    t1_ = time.perf_counter()
    sol = solve_dense(A, B, overwrite_a=True)
    del A
    t2_ = time.perf_counter()
    En, X1, X2 = sol.x[:n], sol.x[n:2 * n], sol.x[2 * n:]
    Dn = -kappa * (En + En_i) - dEn_i
    E = frames.to_cartesian(np.stack([En, -Et1_i, -Et2_i], axis=1))
    dE = frames.to_cartesian(np.stack([Dn, X1, X2], axis=1))
    logger.info(
        "PEC solve k=%g N=%d residual=%.2e cond=%.2e", incident.k, n, sol.residual, sol.condition
    )
    return PecSolution(
        En, X1, X2, E, dE, incident, sol.residual, sol.condition, mesh.fingerprint,
        {"assembly": t1_ - t0, "solve": t2_ - t1_},
    )


def solve_dielectric(
    mesh: QuadMesh,
    frames: NodeFrames,
    incident: EmIncident,
    eps_ratio: float,
    k_in: Optional[complex] = None,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    tangential: Optional[TangentialOps] = None,
) -> DielectricSolution:
    """Scattering by a homogeneous dielectric body with equal permeabilities.

    Parameters
    ----------
    eps_ratio : float
        ``eps_in / eps_out``, positive.
    k_in : complex, optional
        Interior wavenumber.  Defaults to ``k_out * sqrt(eps_ratio)``;
        a value inconsistent with that relation is rejected.
    tangential : TangentialOps, optional
        Precomputed tangential derivative operators.

    Returns
    -------
    DielectricSolution

    Raises
    ------
    MaterialError
        If ``eps_ratio <= 0`` or ``k_in`` does not match it.
    """
    _check(mesh, frames, incident)
    eps_ratio = float(eps_ratio)
    if not np.isfinite(eps_ratio) or eps_ratio <= 0:
        raise MaterialError("eps_ratio must be positive")
    k_out = incident.k
    expected = k_out * np.sqrt(eps_ratio)
    if k_in is None:
        k_in = expected
    elif abs(complex(k_in) ** 2 - expected**2) > 1e-8 * abs(expected) ** 2:
        raise MaterialError(
            f"k_in={k_in} is inconsistent with eps_ratio={eps_ratio} "
            f"(expected {expected:.12g} for equal permeabilities)"
        )
    k_in = complex(k_in)
    eps = 1.0 / eps_ratio  # eps_out / eps_in, the jump factor of E_n
    n = mesh.n_nodes
    if isinstance(quadrature, MeshQuadrature):
        mq = quadrature
    else:
        mq = MeshQuadrature(mesh, quadrature)
    ops = tangential or tangential_ops(mesh, frames)
    t0 = time.perf_counter()
    ext = assemble(mesh, frames, k_out, True, mq)
    He, Ge = ext.H, ext.G
    del ext
    kappa = frames.kappa
    cols = _columns(frames)
    nrm, t1, t2 = cols
    A = np.empty((6 * n, 6 * n), dtype=complex)
    B = np.zeros(6 * n, dtype=complex)
    for a in range(3):
        rows = slice(a * n, (a + 1) * n)
        for j in range(3):
            A[rows, j * n:(j + 1) * n] = He * cols[j][:, a][None, :]
            A[rows, (3 + j) * n:(4 + j) * n] = Ge * (-cols[j][:, a])[None, :]
    del He, Ge
    inn = assemble(mesh, frames, k_in, False, mq)
    Hi, Gi = inn.H, inn.G
    del inn
    En_i = incident.local[:, 0]
    for a in range(3):
        rows = slice((3 + a) * n, (4 + a) * n)
        # Interior operator acting on the exterior E_n through the interface jumps.
        Hbar = (eps * Hi + (eps - 1.0) * Gi * kappa[None, :]) * nrm[:, a][None, :]
        Hbar -= (eps - 1.0) * (
            _times_sparse(Gi * t1[:, a][None, :], ops.D_t1)
            + _times_sparse(Gi * t2[:, a][None, :], ops.D_t2)
        )
        A[rows, 0:n] = Hbar
        A[rows, n:2 * n] = Hi * t1[:, a][None, :]
        A[rows, 2 * n:3 * n] = Hi * t2[:, a][None, :]
        for j in range(3):
            A[rows, (3 + j) * n:(4 + j) * n] = Gi * (-cols[j][:, a])[None, :]
        B[rows] = (
            -Hbar @ En_i
            - Hi @ (t1[:, a] * incident.local[:, 1] + t2[:, a] * incident.local[:, 2])
            + Gi @ incident.dE_dn[:, a]
        )
    del Hi, Gi, Hbar
    t1_ = time.perf_counter()
    sol = solve_dense(A, B, overwrite_a=True)
    del A
    t2_ = time.perf_counter()
    u = sol.x.reshape(6, n).T.copy()
    E = frames.to_cartesian(u[:, :3])
    dE = frames.to_cartesian(u[:, 3:])
    tot = u[:, :3] + incident.local
    dtot = u[:, 3:] + incident.dlocal
    tr = np.stack([eps * tot[:, 0], tot[:, 1], tot[:, 2]], axis=1)
    dtr = np.stack(
        [
            dtot[:, 0] - (eps - 1.0) * kappa * tot[:, 0],
            dtot[:, 1] + (eps - 1.0) * (ops.D_t1 @ tot[:, 0]),
            dtot[:, 2] + (eps - 1.0) * (ops.D_t2 @ tot[:, 0]),
        ],
        axis=1,
    )
    logger.info(
        "dielectric solve k_out=%g k_in=%s N=%d residual=%.2e cond=%.2e",
        k_out, k_in, n, sol.residual, sol.condition,
    )
    return DielectricSolution(
        u, E, dE, frames.to_cartesian(tr), frames.to_cartesian(dtr), eps_ratio, k_in,
        incident, sol.residual, sol.condition, mesh.fingerprint,
        {"assembly": t1_ - t0, "solve": t2_ - t1_},
    )


def _times_sparse(M: np.ndarray, S) -> np.ndarray:
    """Dense ``M`` times sparse ``S``."""
    return np.asarray((S.T @ M.T).T)


def evaluate_em_field(
    mesh: QuadMesh,
    solution: EmSolution,
    points,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    locator: Optional[SurfaceLocator] = None,
) -> np.ndarray:
    """Electric field at off-surface points.

    Exterior points receive the scattered field.  Interior points receive
    the transmitted field of a dielectric body; they are rejected for a
    conductor, whose interior carries no field.

    Parameters
    ----------
    points : array_like (P, 3)

    Returns
    -------
    ndarray (P, 3), complex

    Raises
    ------
    PointOnSurfaceError
        If a point lies on the surface.
    ValueError
        If a point lies inside a perfect conductor.
    """
    if solution.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("solution belongs to a different mesh")
    pts = np.atleast_2d(np.asarray(points, float))
    out = np.zeros((len(pts), 3), dtype=complex)
    if len(pts) == 0:
        return out
    loc = locator or SurfaceLocator(mesh)
    mq = quadrature if isinstance(quadrature, MeshQuadrature) else MeshQuadrature(mesh, quadrature)
    side = loc.query(pts).side
    outside = np.flatnonzero(side > 0)
    inside = np.flatnonzero(side < 0)
    if outside.size:
        out[outside] = represent(
            mesh, solution.E, solution.dE_dn, solution.k, pts[outside], +1.0, mq, loc
        )
    if inside.size:
        if not isinstance(solution, DielectricSolution):
            raise ValueError(
                f"point {pts[inside[0]].tolist()} lies inside the perfect conductor"
            )
        out[inside] = represent(
            mesh, solution.E_tr, solution.dE_tr_dn, solution.k_in, pts[inside], -1.0, mq, loc
        )
    return out


def divergence_check(
    mesh: QuadMesh,
    solution: Union[EmSolution, EmIncident],
    points,
    h: float,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
) -> float:
    """Normalised divergence ``max |div E| / (|k| max |E|)`` at ``points``.

    The divergence is estimated with central differences of step ``h``.
    Points should lie farther than ``4 h`` from the surface.  An
    :class:`EmIncident` is checked analytically sampled, without a mesh
    integral.

    Returns
    -------
    float
        Zero when the field vanishes at every point.
    """
    pts = np.atleast_2d(np.asarray(points, float))
    h = float(h)
    if not h > 0:
        raise ValueError("h must be positive")
    offsets = np.concatenate([h * np.eye(3), -h * np.eye(3)])
    stencil = (pts[:, None, :] + offsets[None, :, :]).reshape(-1, 3)
    allpts = np.concatenate([pts, stencil])
    if isinstance(solution, EmIncident):
        vals = solution.evaluate(allpts)
    else:
        vals = evaluate_em_field(mesh, solution, allpts, quadrature)
    centre = vals[: len(pts)]
    st = vals[len(pts):].reshape(len(pts), 6, 3)
    div = sum((st[:, c, c] - st[:, 3 + c, c]) / (2.0 * h) for c in range(3))
    scale = np.max(np.linalg.norm(centre, axis=1))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(div)) / (abs(solution.k) * scale))
