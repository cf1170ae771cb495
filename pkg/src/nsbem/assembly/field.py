"""Off-surface evaluation of the Helmholtz representation formula."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..errors import PointOnSurfaceError
from ..geometry.mesh import QuadMesh
from ..geometry.proximity import SurfaceLocator
from . import _core
from .quadrature_data import MeshQuadrature, QuadratureConfig

logger = logging.getLogger(__name__)

#: Points closer than this (in units of the characteristic length) are on the surface.
ON_SURFACE_TOLERANCE = 1e-9


def represent(
    mesh: QuadMesh,
    phi: np.ndarray,
    dphi_dn: np.ndarray,
    k: complex,
    points,
    sign: float = 1.0,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    locator: Optional[SurfaceLocator] = None,
) -> np.ndarray:
    """``sign/(4 pi) [int phi dG_k/dn dS - int dphi/dn G_k dS]`` at ``points``.

    Normals and normal derivatives refer to the body-outward orientation.
    Use ``sign=+1`` for points in the exterior domain and ``sign=-1`` for
    points inside the body (interior representation).

    Parameters
    ----------
    phi, dphi_dn : ndarray (N,) or (N, m)
        Surface data; several columns are evaluated in one pass.
    points : array_like (P, 3)

    Returns
    -------
    ndarray (P,) or (P, m), complex

    Raises
    ------
    PointOnSurfaceError
        If a point lies within ``1e-9 a`` of the surface or adaptive
        subdivision cannot resolve it.
    """
    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, float)))
    phi = np.asarray(phi, dtype=complex)
    squeeze = phi.ndim == 1
    PHI = np.ascontiguousarray(phi.reshape(mesh.n_nodes, -1))
    DPHI = np.ascontiguousarray(np.asarray(dphi_dn, dtype=complex).reshape(mesh.n_nodes, -1))
    if len(pts) == 0:
        return np.zeros((0,) if squeeze else (0, PHI.shape[1]), dtype=complex)
    loc = locator or SurfaceLocator(mesh)
    prox = loc.query(pts)
    bad = np.flatnonzero(prox.distance < ON_SURFACE_TOLERANCE * mesh.characteristic_length)
    if bad.size:
        raise PointOnSurfaceError(
            f"point {pts[bad[0]].tolist()} lies on the surface "
            f"(distance {prox.distance[bad[0]]:.3e})"
        )
    if isinstance(quadrature, MeshQuadrature):
        mq = quadrature
    else:
        mq = MeshQuadrature(mesh, quadrature)
    cfg = mq.config
    out, status = _core.evaluate_points(
        pts, mesh.nodes, mesh.elements, mq.centers, mq.radii,
        mq.distant.X, mq.distant.N, mq.distant.W, mq.far.X, mq.far.N, mq.far.W,
        mq.interpolate(PHI, mq.distant), mq.interpolate(DPHI, mq.distant),
        mq.interpolate(PHI, mq.far), mq.interpolate(DPHI, mq.far), PHI, DPHI,
        mq.rule_xi, mq.rule_eta, mq.rule_w, mq.gl_x, mq.gl_w,
        cfg.near_ratio, cfg.distant_ratio, cfg.field_max_depth, cfg.max_points,
        complex(k), float(sign), 16,
    )
    bad = np.flatnonzero(status)
    if bad.size:
        raise PointOnSurfaceError(
            f"point {pts[bad[0]].tolist()} is too close to the surface to integrate "
            f"(distance {prox.distance[bad[0]]:.3e})"
        )
    return out[:, 0] if squeeze else out
