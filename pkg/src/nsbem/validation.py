"""Built-in oracle suite run by ``nsbem validate``.

Every check compares the solver against an exact identity or an
analytical series on a coarse sphere, so the suite finishes in seconds
once the compiled kernels are cached.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .assembly import MeshQuadrature, QuadratureConfig, assemble
from .geometry import generate_sphere_mesh, node_frames, sphere_points

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one oracle comparison.

    Attributes
    ----------
    name : str
    value : float
        Measured error.
    threshold : float
        The check passes when ``value < threshold``.
    seconds : float
    """

    name: str
    value: float
    threshold: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value < self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: {self.value:.3e} (threshold {self.threshold:.1e}, "
            f"{self.seconds:.1f} s)"
        )


def constant_potential_error(refinement: int = 2, quadrature=None) -> float:
    """``max |H 1 - 4 pi|`` for the exterior Laplace matrix on the unit sphere."""
    mesh = generate_sphere_mesh(1.0, refinement)
    mats = assemble(mesh, node_frames(mesh), 0.0, True, quadrature, store_g=False)
    return float(np.max(np.abs(mats.H.sum(axis=1) - 4.0 * np.pi)))


def point_source_residual(
    sources,
    k: float = 1.0,
    refinement: int = 2,
    quadrature=None,
    norm: str = "l2",
) -> float:
    """Largest relative residual of ``H phi = G dphi/dn`` over interior sources.

    ``phi = exp(i k r) / r`` radiates from each source inside the unit
    sphere, so it is an exact exterior solution.

    Parameters
    ----------
    sources : array_like (S, 3)
        Points strictly inside the unit sphere.
    norm : {"l2", "max"}
        ``"l2"``: ``||H phi - G dphi/dn||_2 / ||phi||_2`` over the nodes.
        ``"max"``: ``max |H phi - G dphi/dn| / max |phi|``.
    """
    if norm not in ("l2", "max"):
        raise ValueError("norm must be 'l2' or 'max'")
    mesh = generate_sphere_mesh(1.0, refinement)
    frames = node_frames(mesh)
    src = np.atleast_2d(np.asarray(sources, float))
    d = mesh.nodes[:, None, :] - src[None, :, :]
    r = np.linalg.norm(d, axis=2)
    phi = np.exp(1j * k * r) / r
    dphi = (1j * k * r - 1.0) * phi / r**2 * np.einsum("nsc,nc->ns", d, frames.normal)
    mats = assemble(mesh, frames, k, True, quadrature, store_g=False, rhs=dphi)
    res = np.abs(mats.H @ phi - mats.g_times_rhs)
    if norm == "l2":
        res, scale = np.linalg.norm(res, axis=0), np.linalg.norm(phi, axis=0)
    else:
        res, scale = res.max(axis=0), np.abs(phi).max(axis=0)
    return float(np.max(res / scale))


def rigid_sphere_error(ka: float = 1.0, refinement: int = 2, quadrature=None) -> float:
    """Relative error of the hard-sphere scattered field at ``r = 1.5 a``."""
    from .acoustics import PlaneWave, evaluate_field, solve_hard
    from .oracles import rigid_sphere_scatter

    mesh = generate_sphere_mesh(1.0, refinement)
    frames = node_frames(mesh)
    mq = MeshQuadrature(mesh, quadrature)
    sol = solve_hard(mesh, frames, PlaneWave(ka), quadrature=mq)
    pts = sphere_points(20, 1.5)
    got = evaluate_field(mesh, sol, pts, quadrature=mq)
    ref = rigid_sphere_scatter(ka, 1.5, np.arccos(pts[:, 2] / 1.5))
    return float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))


def mie_pec_error(ka: float = 1.0, refinement: int = 2, quadrature=None) -> float:
    """Max relative ``|E_sc|`` error against the PEC Mie series at ``r = 2 a``."""
    from .electromagnetics import evaluate_em_field, incident_em, solve_pec
    from .oracles import mie_pec

    mesh = generate_sphere_mesh(1.0, refinement)
    frames = node_frames(mesh)
    mq = MeshQuadrature(mesh, quadrature)
    inc = incident_em(ka, (0, 0, 1), (1, 0, 0), mesh, frames)
    sol = solve_pec(mesh, frames, inc, mq)
    pts = sphere_points(20, 2.0)
    got = np.linalg.norm(evaluate_em_field(mesh, sol, pts, mq), axis=1)
    ref = np.linalg.norm(mie_pec(ka, pts, (0, 0, 1), (1, 0, 0)), axis=1)
    return float(np.max(np.abs(got - ref) / ref))


def _timed(name: str, threshold: float, fn: Callable[[], float]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        value = fn()
    except Exception as exc:  # reported as a failed check, not a crash
        logger.error("check %s raised %s: %s", name, type(exc).__name__, exc)
        value = float("nan")
    return CheckResult(name, value, threshold, time.perf_counter() - t0)


def run_suite(
    quadrature: Optional[QuadratureConfig] = None, report: Optional[Callable[[str], None]] = None
) -> List[CheckResult]:
    """Run every built-in check at refinement 2.

    Parameters
    ----------
    report : callable, optional
        Receives the result line of each check as soon as it finishes.
    """
    rng = np.random.default_rng(2024)
    dirs = rng.normal(size=(5, 3))
    sources = dirs / np.linalg.norm(dirs, axis=1)[:, None] * rng.uniform(0.0, 0.5, (5, 1))
    checks = [
        ("constant-potential identity (max |H 1 - 4 pi|)", 1e-6,
         lambda: constant_potential_error(2, quadrature)),
        ("point-source identity (max residual / max |phi|)", 1e-2,
         lambda: point_source_residual(sources, 1.0, 2, quadrature, norm="max")),
        ("rigid-sphere series, ka=1, r=1.5a", 1e-2,
         lambda: rigid_sphere_error(1.0, 2, quadrature)),
        ("PEC Mie series, ka=1, r=2a", 2e-2,
         lambda: mie_pec_error(1.0, 2, quadrature)),
    ]
    results = []
    for name, threshold, fn in checks:
        result = _timed(name, threshold, fn)
        results.append(result)
        if report is not None:
            report(result.line())
    return results
