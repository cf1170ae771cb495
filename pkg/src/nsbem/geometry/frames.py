"""Per-node differential geometry: normals, tangent frames and curvatures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateFrameError
from .mesh import QuadMesh
from .shape import LOCAL_NODE_COORDS, shape_derivatives


@dataclass(frozen=True)
class NodeFrame:
    """Differential geometry at a single collocation node.

    Attributes
    ----------
    normal, t1, t2 : ndarray (3,)
        Orthonormal triad with ``normal = t1 x t2``; the normal points out
        of the body.
    kappa : float
        ``kappa1 + kappa2``; equals ``2/R`` on a sphere of radius ``R``.
    kappa1, kappa2 : float
        Normal curvatures along ``t1`` and ``t2``, positive where the
        surface bends away from the normal (convex bodies).
    """

    normal: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    kappa: float
    kappa1: float
    kappa2: float


@dataclass(frozen=True, eq=False)
class NodeFrames:
    """Frames for every node, stored as arrays.

    Indexing returns a :class:`NodeFrame`; ``len`` is the node count.
    """

    normal: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    kappa: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    mesh_fingerprint: str = ""

    def __len__(self) -> int:
        return len(self.kappa)

    def __getitem__(self, i: int) -> NodeFrame:
        return NodeFrame(
            self.normal[i].copy(),
            self.t1[i].copy(),
            self.t2[i].copy(),
            float(self.kappa[i]),
            float(self.kappa1[i]),
            float(self.kappa2[i]),
        )

    def to_local(self, vec: np.ndarray) -> np.ndarray:
        """Project Cartesian nodal vectors ``(N, 3)`` onto (n, t1, t2)."""
        return np.stack(
            [
                np.einsum("ic,ic->i", vec, self.normal),
                np.einsum("ic,ic->i", vec, self.t1),
                np.einsum("ic,ic->i", vec, self.t2),
            ],
            axis=1,
        )

    def to_cartesian(self, local: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_local`."""
        return (
            local[:, 0:1] * self.normal
            + local[:, 1:2] * self.t1
            + local[:, 2:3] * self.t2
        )


def node_element_incidence(mesh: QuadMesh):
    """Elements adjacent to each node, in increasing element order.

    Returns
    -------
    ptr : ndarray (N + 1,)
    elem : ndarray
        Adjacent element indices; node ``i`` owns ``elem[ptr[i]:ptr[i+1]]``.
    local : ndarray
        Local index (0-5) of the node in the matching element.
    """
    e_idx = np.repeat(np.arange(mesh.n_elements), 6)
    l_idx = np.tile(np.arange(6), mesh.n_elements)
    n_idx = mesh.elements.ravel()
    order = np.lexsort((e_idx, n_idx))
    counts = np.bincount(n_idx, minlength=mesh.n_nodes)
    ptr = np.concatenate([[0], np.cumsum(counts)])
    return ptr, e_idx[order], l_idx[order]


def _local_tangents(mesh: QuadMesh):
    """Tangents d/dxi and d/deta of every element at each of its nodes, (E, 6, 3)."""
    dxi, deta = shape_derivatives(LOCAL_NODE_COORDS[:, 0], LOCAL_NODE_COORDS[:, 1])
    xe = mesh.nodes[mesh.elements]
    a1 = np.einsum("jq,ejc->eqc", dxi, xe)
    a2 = np.einsum("jq,ejc->eqc", deta, xe)
    return a1, a2


def node_frames(mesh: QuadMesh, tolerance: float = 0.2) -> NodeFrames:
    """Compute the frame and curvatures at every node.

    The node normal is the sum of the adjacent elements' unnormalised
    normals ``dxi x deta`` evaluated at the node (an area-weighted
    average), renormalised.  ``t1`` is the first shape-function tangent of
    the lowest-indexed adjacent element projected onto the tangent plane,
    and ``t2 = n x t1``.  Curvatures come from the second fundamental form
    of each adjacent element, expressed in the (t1, t2) basis and averaged
    with the same area weights.  The element second fundamental form is
    built from the shape-function derivatives of the interpolated node
    normals, ``II_ij = -(n_,i . x_,j + n_,j . x_,i) / 2``, rather than from
    second derivatives of the position, whose curvature error on coarse
    quadratic meshes is several times larger.

    Parameters
    ----------
    mesh : QuadMesh
    tolerance : float
        A node is rejected as degenerate when the averaged normal has a
        length below ``tolerance`` times the mean adjacent weight.

    Raises
    ------
    DegenerateFrameError
        If adjacent normals cancel.
    """
    ptr, adj_elem, adj_local = node_element_incidence(mesh)
    a1, a2 = _local_tangents(mesh)
    cross = np.cross(a1, a2)  # (E, 6, 3)
    weight = np.linalg.norm(cross, axis=-1)

    n_nodes = mesh.n_nodes
    normal = np.zeros((n_nodes, 3))
    np.add.at(normal, mesh.elements.ravel(), cross.reshape(-1, 3))
    wsum = np.bincount(mesh.elements.ravel(), weights=weight.ravel(), minlength=n_nodes)
    length = np.linalg.norm(normal, axis=1)
    bad = length < tolerance * wsum
    if bad.any():
        raise DegenerateFrameError(
            f"adjacent element normals cancel at node {int(np.flatnonzero(bad)[0])}"
        )
    normal /= length[:, None]

    first_elem = adj_elem[ptr[:-1]]
    first_local = adj_local[ptr[:-1]]
    t1 = a1[first_elem, first_local]
    t1 = t1 - np.einsum("ic,ic->i", t1, normal)[:, None] * normal
    t1_len = np.linalg.norm(t1, axis=1)
    if np.any(t1_len <= 1e-12 * np.linalg.norm(a1[first_elem, first_local], axis=1)):
        raise DegenerateFrameError("tangent parallel to the node normal")
    t1 /= t1_len[:, None]
    t2 = np.cross(normal, t1)
    t2 /= np.linalg.norm(t2, axis=1)[:, None]

    # Second fundamental form per (element, local node) in the node basis.
    # It is taken from the derivative of the interpolated nodal normal field
    # (Weingarten relation, symmetrised), which reproduces the curvature of
    # a sphere exactly and is exact (zero) on planes.
    node_of = mesh.elements  # (E, 6)
    dxi, deta = shape_derivatives(LOCAL_NODE_COORDS[:, 0], LOCAL_NODE_COORDS[:, 1])
    ne = normal[node_of]  # (E, 6, 3) nodal normals per element
    n1 = np.einsum("jq,ejc->eqc", dxi, ne)
    n2 = np.einsum("jq,ejc->eqc", deta, ne)
    tt1 = t1[node_of]
    tt2 = t2[node_of]
    jmat = np.empty(node_of.shape + (2, 2))
    jmat[..., 0, 0] = np.einsum("elc,elc->el", a1, tt1)
    jmat[..., 0, 1] = np.einsum("elc,elc->el", a2, tt1)
    jmat[..., 1, 0] = np.einsum("elc,elc->el", a1, tt2)
    jmat[..., 1, 1] = np.einsum("elc,elc->el", a2, tt2)
    jinv = np.linalg.inv(jmat)
    two = np.empty(node_of.shape + (2, 2))
    two[..., 0, 0] = -np.einsum("elc,elc->el", n1, a1)
    two[..., 0, 1] = -0.5 * (
        np.einsum("elc,elc->el", n1, a2) + np.einsum("elc,elc->el", n2, a1)
    )
    two[..., 1, 0] = two[..., 0, 1]
    two[..., 1, 1] = -np.einsum("elc,elc->el", n2, a2)
    two_t = np.einsum("elji,eljk,elkm->elim", jinv, two, jinv)

    acc = np.zeros((n_nodes, 2))
    np.add.at(acc[:, 0], node_of.ravel(), (weight * two_t[..., 0, 0]).ravel())
    np.add.at(acc[:, 1], node_of.ravel(), (weight * two_t[..., 1, 1]).ravel())
    kappa1 = -acc[:, 0] / wsum
    kappa2 = -acc[:, 1] / wsum
    for arr in (normal, t1, t2, kappa1, kappa2):
        arr.setflags(write=False)
    kappa = kappa1 + kappa2
    kappa.setflags(write=False)
    return NodeFrames(normal, t1, t2, kappa, kappa1, kappa2, mesh.fingerprint)
