"""Quadrature settings and per-mesh precomputed integration data."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import QuadratureError
from ..geometry.mesh import QuadMesh, _eval_all
from ..geometry.quadrature import gauss_legendre_unit, gauss_rule
from ..geometry.shape import shape_functions


@dataclass(frozen=True)
class QuadratureConfig:
    """Element integration settings.

    Attributes
    ----------
    far_degree : int
        Symmetric rule for elements whose bounding-sphere centre lies
        farther than ``near_ratio`` radii from the collocation point.
    distant_degree : int
        Cheaper rule beyond ``distant_ratio`` radii.
    near_degree : int
        Rule applied on each accepted sub-triangle of a near element.
    duffy_order : int
        Gauss-Legendre points per direction on each collapsed sub-triangle
        of an element that contains the collocation node.
    near_ratio, distant_ratio : float
        Distance thresholds in units of the (sub-)element bounding radius.
    max_depth : int
        Subdivision depth limit for near elements during assembly.
    field_max_depth : int
        Depth limit for off-surface field evaluation; exceeding it means
        the evaluation point is (numerically) on the surface.
    max_points : int
        Capacity of the per-element scratch buffers.
    """

    far_degree: int = 8
    distant_degree: int = 5
    near_degree: int = 8
    duffy_order: int = 10
    near_ratio: float = 3.0
    distant_ratio: float = 8.0
    max_depth: int = 10
    field_max_depth: int = 30
    max_points: int = 40000

    def __post_init__(self) -> None:
        for name in ("far_degree", "distant_degree", "near_degree"):
            gauss_rule(getattr(self, name))
        if self.duffy_order < 2:
            raise QuadratureError("duffy_order must be at least 2")
        if not 1.0 < self.near_ratio <= self.distant_ratio:
            raise QuadratureError("need 1 < near_ratio <= distant_ratio")
        if self.max_depth < 1 or self.field_max_depth < 1:
            raise QuadratureError("depth limits must be positive")


@dataclass(frozen=True)
class _TierRule:
    X: np.ndarray  # (E, Q, 3) points
    N: np.ndarray  # (E, Q, 3) unit normals
    W: np.ndarray  # (E, Q) weights times area element
    S: np.ndarray  # (Q, 6) shape values


def _tier(mesh: QuadMesh, degree: int) -> _TierRule:
    rule = gauss_rule(degree)
    pos, _, _, normal, jac = _eval_all(mesh, rule.xi, rule.eta)
    S = np.ascontiguousarray(shape_functions(rule.xi, rule.eta).T)
    return _TierRule(
        np.ascontiguousarray(pos),
        np.ascontiguousarray(normal),
        np.ascontiguousarray(jac * rule.weights),
        S,
    )


class MeshQuadrature:
    """Mesh-specific integration data shared by all assemblies on a mesh."""

    def __init__(self, mesh: QuadMesh, config: QuadratureConfig | None = None):
        self.mesh = mesh
        self.config = config or QuadratureConfig()
        cfg = self.config
        self.far = _tier(mesh, cfg.far_degree)
        self.distant = _tier(mesh, cfg.distant_degree)
        near = gauss_rule(cfg.near_degree)
        self.rule_xi = np.ascontiguousarray(near.xi)
        self.rule_eta = np.ascontiguousarray(near.eta)
        self.rule_w = np.ascontiguousarray(near.weights)
        self.gl_x, self.gl_w = gauss_legendre_unit(cfg.duffy_order)
        centers, _, _, _, _ = _eval_all(mesh, np.array([1.0 / 3.0]), np.array([1.0 / 3.0]))
        self.centers = np.ascontiguousarray(centers[:, 0, :])
        xe = mesh.nodes[mesh.elements]
        r_nodes = np.linalg.norm(xe - self.centers[:, None, :], axis=-1).max(axis=1)
        r_quad = np.linalg.norm(self.far.X - self.centers[:, None, :], axis=-1).max(axis=1)
        self.radii = np.ascontiguousarray(np.maximum(r_nodes, r_quad))

    @cached_property
    def element_diameters(self) -> np.ndarray:
        return 2.0 * self.radii

    def interpolate(self, values: np.ndarray, tier: _TierRule) -> np.ndarray:
        """Nodal values ``(N, m)`` interpolated to tier points, ``(E, Q, m)``."""
        vals = values[self.mesh.elements]  # (E, 6, m)
        return np.ascontiguousarray(np.einsum("qj,ejm->eqm", tier.S, vals))
