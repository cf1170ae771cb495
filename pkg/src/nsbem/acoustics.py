"""Scalar Helmholtz scattering: plane waves, hard scatterers, fields and sweeps."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .assembly import (
    MeshQuadrature,
    QuadratureConfig,
    TangentialOps,
    assemble,
    assemble_burton_miller,
    solve_dense,
)
from .assembly.field import represent
from .geometry.frames import NodeFrames
from .geometry.mesh import QuadMesh
from .geometry.proximity import SurfaceLocator

logger = logging.getLogger(__name__)

FORMULATIONS = ("standard", "burton-miller")


@dataclass(frozen=True)
class PlaneWave:
    """Incident plane wave ``amplitude * exp(i k direction . x)``.

    Attributes
    ----------
    k : complex
        Wavenumber in inverse length units.
    direction : ndarray (3,)
        Unit propagation direction.
    amplitude : complex
    """

    k: complex
    direction: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    amplitude: complex = 1.0

    def __post_init__(self) -> None:
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,) or abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit 3-vector")
        object.__setattr__(self, "direction", d)
        if not np.isfinite(complex(self.k)):
            raise ValueError("k must be finite")

    def evaluate(self, points) -> np.ndarray:
        """Incident potential at ``points`` (P, 3)."""
        pts = np.atleast_2d(np.asarray(points, float))
        return self.amplitude * np.exp(1j * complex(self.k) * (pts @ self.direction))

    def normal_derivative(self, points, normals) -> np.ndarray:
        """``d phi_inc / dn = i k (d . n) phi_inc``."""
        n = np.atleast_2d(np.asarray(normals, float))
        return 1j * complex(self.k) * (n @ self.direction) * self.evaluate(points)


def incident_scalar(wave: PlaneWave, mesh: QuadMesh, frames: NodeFrames):
    """Incident potential and its body-normal derivative at the nodes.

    Returns
    -------
    phi_inc, dphi_inc_dn : ndarray (N,), complex
    """
    return wave.evaluate(mesh.nodes), wave.normal_derivative(mesh.nodes, frames.normal)


@dataclass(frozen=True, eq=False)
class ScatterSolution:
    """Scattered surface field of an exterior problem.

    Attributes
    ----------
    phi : ndarray (N,)
        Scattered potential at the nodes.
    dphi_dn : ndarray (N,)
        Its derivative along the body-outward normal.
    k : complex
    bc_kind : str
        ``"hard"`` or ``"velocity"``.
    formulation : str
        ``"standard"`` or ``"burton-miller"``.
    solve_residual : float
        Relative residual of the dense solve.
    condition : float
        Condition-number estimate of the system matrix.
    mesh_fingerprint : str
    wave : PlaneWave or None
        Incident wave, if any.
    timings : dict
        Seconds spent in ``assembly`` and ``solve``.
    """

    phi: np.ndarray
    dphi_dn: np.ndarray
    k: complex
    bc_kind: str
    formulation: str
    solve_residual: float
    condition: float
    mesh_fingerprint: str
    wave: Optional[PlaneWave] = None
    timings: dict = field(default_factory=dict)


def solve_neumann(
    mesh: QuadMesh,
    frames: NodeFrames,
    k: complex,
    dphi_dn: np.ndarray,
    formulation: str = "standard",
    *,
    beta: Optional[float] = None,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    tangential: Optional[TangentialOps] = None,
    bc_kind: str = "velocity",
    wave: Optional[PlaneWave] = None,
) -> ScatterSolution:
    """Exterior radiation problem with prescribed normal derivative.

    Parameters
    ----------
    dphi_dn : ndarray (N,)
        Body-normal derivative of the unknown exterior field.
    formulation : {"standard", "burton-miller"}
    beta : float, optional
        Burton-Miller coupling length (default ``min(0.5 a, 1/|k|)``).

    Returns
    -------
    ScatterSolution
    """
    if formulation not in FORMULATIONS:
        raise ValueError(f"formulation must be one of {FORMULATIONS}")
    if frames.mesh_fingerprint and frames.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("frames were computed for a different mesh")
    dphi = np.asarray(dphi_dn, dtype=complex)
    if dphi.shape != (mesh.n_nodes,):
        raise ValueError("dphi_dn must have one value per node")
    t0 = time.perf_counter()
    if formulation == "standard":
        mats = assemble(mesh, frames, k, True, quadrature, store_g=False, rhs=dphi)
        A, b = mats.H, mats.g_times_rhs
    else:
        A, R = assemble_burton_miller(
            mesh, frames, k, beta, True, quadrature, tangential=tangential
        )
        b = R @ dphi
        del R
    t1 = time.perf_counter()
    sol = solve_dense(A, b, overwrite_a=True)
    del A
    t2 = time.perf_counter()
    logger.info(
        "%s solve k=%s N=%d residual=%.2e cond=%.2e", formulation, k, mesh.n_nodes,
        sol.residual, sol.condition,
    )
    return ScatterSolution(
        phi=sol.x,
        dphi_dn=dphi,
        k=complex(k),
        bc_kind=bc_kind,
        formulation=formulation,
        solve_residual=sol.residual,
        condition=sol.condition,
        mesh_fingerprint=mesh.fingerprint,
        wave=wave,
        timings={"assembly": t1 - t0, "solve": t2 - t1},
    )


def solve_hard(
    mesh: QuadMesh,
    frames: NodeFrames,
    wave: PlaneWave,
    formulation: str = "standard",
    **kwargs,
) -> ScatterSolution:
    """Scattering of ``wave`` by a sound-hard body.

    The total normal derivative vanishes, so the scattered field has
    ``dphi_sc/dn = -dphi_inc/dn``.  Keyword arguments are passed to
    :func:`solve_neumann`.
    """
    _, dinc = incident_scalar(wave, mesh, frames)
    return solve_neumann(
        mesh, frames, wave.k, -dinc, formulation, bc_kind="hard", wave=wave, **kwargs
    )


def velocity_boundary(mesh: QuadMesh, tags: Sequence[int], velocity: complex = 1.0) -> np.ndarray:
    """Nodal normal velocity: ``velocity`` on elements with one of ``tags``, zero elsewhere.

    Nodes shared between a driven element and an undriven one are driven.
    The result is the ``dphi_dn`` argument of :func:`solve_neumann` for a
    vibrating patch on an otherwise rigid body.

    Examples
    --------
    >>> from nsbem.geometry import generate_sphere_mesh
    >>> m = generate_sphere_mesh(1.0, 1)
    >>> float(velocity_boundary(m, [0], 2.0).max().real)
    2.0
    """
    if mesh.tags is None:
        raise ValueError("mesh carries no element tags")
    driven = np.isin(mesh.tags, np.asarray(list(tags), dtype=int))
    out = np.zeros(mesh.n_nodes, dtype=complex)
    out[np.unique(mesh.elements[driven])] = velocity
    return out


def evaluate_field(
    mesh: QuadMesh,
    solution: ScatterSolution,
    points,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    locator: Optional[SurfaceLocator] = None,
) -> np.ndarray:
    """Scattered potential at exterior points.

    Parameters
    ----------
    points : array_like (P, 3)
        Points in the fluid domain (outside the body).

    Raises
    ------
    PointOnSurfaceError
        If a point lies on the surface.
    """
    if solution.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("solution belongs to a different mesh")
    return represent(
        mesh, solution.phi, solution.dphi_dn, solution.k, points, +1.0, quadrature, locator
    )


def total_field(mesh: QuadMesh, solution: ScatterSolution, points, **kwargs) -> np.ndarray:
    """Incident plus scattered potential at exterior points."""
    sc = evaluate_field(mesh, solution, points, **kwargs)
    if solution.wave is None:
        return sc
    return sc + solution.wave.evaluate(points)


@dataclass(frozen=True)
class SweepResult:
    """Maximum total-field magnitude over probes for each ``ka``.

    Attributes
    ----------
    ka : ndarray (S,)
    max_abs : ndarray (S,)
    argmax : ndarray (S,) of int
        Index of the probe that attains the maximum.
    residual : ndarray (S,)
    """

    ka: np.ndarray
    max_abs: np.ndarray
    argmax: np.ndarray
    residual: np.ndarray

    @property
    def peak_ka(self) -> float:
        return float(self.ka[int(np.argmax(self.max_abs))])


def sweep(
    mesh: QuadMesh,
    frames: NodeFrames,
    ka_values: Sequence[float],
    probes,
    formulation: str = "standard",
    direction=(0.0, 0.0, 1.0),
    *,
    beta: Optional[float] = None,
    quadrature: QuadratureConfig | None = None,
    callback=None,
) -> SweepResult:
    """Hard-body scattering over a list of ``ka`` values.

    For each ``ka`` the plane wave ``exp(i k d . x)`` with
    ``k = ka / a`` is scattered and ``|phi_tot|`` is evaluated at the
    probes.

    Parameters
    ----------
    ka_values : sequence of float
        Nonempty.
    probes : array_like (P, 3)
        Points in the fluid.
    callback : callable, optional
        Called as ``callback(ka, solution, probe_values)`` after each solve.
    """
    ka_values = np.asarray(ka_values, float)
    if ka_values.size == 0:
        raise ValueError("ka_values must be nonempty")
    probes = np.atleast_2d(np.asarray(probes, float))
    mq = MeshQuadrature(mesh, quadrature)
    locator = SurfaceLocator(mesh)
    ops = None
    if formulation == "burton-miller":
        from .assembly import tangential_ops

        ops = tangential_ops(mesh, frames)
    a = mesh.characteristic_length
    max_abs = np.empty(len(ka_values))
    argmax = np.empty(len(ka_values), dtype=int)
    resid = np.empty(len(ka_values))
    for i, ka in enumerate(ka_values):
        wave = PlaneWave(ka / a, np.asarray(direction, float))
        sol = solve_hard(
            mesh, frames, wave, formulation, beta=beta, quadrature=mq, tangential=ops
        )
        vals = total_field(mesh, sol, probes, quadrature=mq, locator=locator)
        mags = np.abs(vals)
        argmax[i] = int(np.argmax(mags))
        max_abs[i] = mags[argmax[i]]
        resid[i] = sol.solve_residual
        logger.info("sweep ka=%.6g max|phi|=%.6g at probe %d", ka, max_abs[i], argmax[i])
        if callback is not None:
            callback(float(ka), sol, vals)
    return SweepResult(ka_values, max_abs, argmax, resid)
