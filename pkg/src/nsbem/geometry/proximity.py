"""Distance from points to the curved surface and inside/outside side."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .mesh import QuadMesh, _eval_all
from .quadrature import gauss_rule
from .shape import shape_derivatives, shape_functions


@dataclass(frozen=True)
class SurfaceProximity:
    """Closest-point data for a batch of query points.

    Attributes
    ----------
    distance : ndarray (P,)
        Euclidean distance to the quadratic surface.
    side : ndarray (P,) of int
        ``+1`` if the point lies on the side the normals point to (outside
        for a closed body), ``-1`` otherwise.
    element : ndarray (P,) of int
        Element holding the closest point.
    """

    distance: np.ndarray
    side: np.ndarray
    element: np.ndarray


class SurfaceLocator:
    """Reusable closest-point queries on one mesh.

    Parameters
    ----------
    mesh : QuadMesh
    sample_degree : int
        Quadrature degree whose points seed the search.
    candidates : int
        Number of nearest sample points whose elements are refined.
    """

    def __init__(self, mesh: QuadMesh, sample_degree: int = 8, candidates: int = 12):
        self.mesh = mesh
        rule = gauss_rule(sample_degree)
        xi = np.concatenate([rule.xi, [0.0, 1.0, 0.0, 0.5, 0.5, 0.0]])
        eta = np.concatenate([rule.eta, [0.0, 0.0, 1.0, 0.0, 0.5, 0.5]])
        pos, _, _, _, _ = _eval_all(mesh, xi, eta)
        n_e, n_q = pos.shape[:2]
        self._tree = cKDTree(pos.reshape(-1, 3))
        self._elem = np.repeat(np.arange(n_e), n_q)
        self._ref = np.tile(np.stack([xi, eta], axis=1), (n_e, 1))
        self._candidates = min(candidates, n_e * n_q)

    def query(self, points) -> SurfaceProximity:
        pts = np.atleast_2d(np.asarray(points, float))
        _, idx = self._tree.query(pts, k=self._candidates)
        idx = np.atleast_2d(idx)
        dist = np.full(len(pts), np.inf)
        side = np.ones(len(pts), dtype=int)
        elem = np.zeros(len(pts), dtype=int)
        xe_all = self.mesh.nodes[self.mesh.elements]
        for p, cand in enumerate(idx):
            seen = {}
            for c in cand:
                e = int(self._elem[c])
                if e in seen:
                    continue
                seen[e] = True
                d, s = _project(xe_all[e], pts[p], self._ref[c])
                if d < dist[p]:
                    dist[p], side[p], elem[p] = d, s, e
        return SurfaceProximity(dist, side, elem)


def _project(xe: np.ndarray, p: np.ndarray, start: np.ndarray, iterations: int = 20):
    """Closest point on one element by projected Gauss-Newton."""
    u = np.array(start, float)
    for _ in range(iterations):
        N = shape_functions(u[0], u[1])
        dxi, deta = shape_derivatives(u[0], u[1])
        x = N @ xe
        J = np.stack([dxi @ xe, deta @ xe], axis=1)  # (3, 2)
        step = np.linalg.lstsq(J, p - x, rcond=None)[0]
        u_new = _clip(u + step)
        if np.max(np.abs(u_new - u)) < 1e-15:
            u = u_new
            break
        u = u_new
    N = shape_functions(u[0], u[1])
    dxi, deta = shape_derivatives(u[0], u[1])
    x = N @ xe
    n = np.cross(dxi @ xe, deta @ xe)
    r = p - x
    return float(np.linalg.norm(r)), (1 if r @ n >= 0 else -1)


def _clip(u: np.ndarray) -> np.ndarray:
    xi, eta = max(u[0], 0.0), max(u[1], 0.0)
    s = xi + eta
    if s > 1.0:
        xi, eta = xi / s, eta / s
    return np.array([xi, eta])


def surface_proximity(mesh: QuadMesh, points) -> SurfaceProximity:
    """Distance and side of ``points`` relative to ``mesh``.

    Examples
    --------
    >>> from nsbem.geometry import generate_sphere_mesh
    >>> prox = surface_proximity(generate_sphere_mesh(1.0, 1), [[0, 0, 2.0], [0, 0, 0.5]])
    >>> prox.side.tolist()
    [1, -1]
    """
    return SurfaceLocator(mesh).query(points)
