"""Sparse surface-gradient operators at the nodes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateFrameError
from ..geometry.frames import NodeFrames, node_element_incidence
from ..geometry.mesh import QuadMesh
from ..geometry.shape import LOCAL_NODE_COORDS, shape_derivatives

# Coefficients of one row are rounded to a common power-of-two grid this many
# bits below the row's largest magnitude.  All partial sums of a row then
# stay exactly representable, so D @ ones is exactly zero in any order.
_QUANT_BITS = 40


@dataclass(frozen=True, eq=False)
class TangentialOps:
    """Nodal tangential derivative operators.

    Attributes
    ----------
    D_t1, D_t2 : scipy.sparse.csr_matrix (N, N), real
        ``(D_t1 @ v)[i]`` approximates the derivative of the interpolated
        field ``v`` along the node tangent ``t1[i]`` (likewise ``t2``).
        Rows sum to exactly zero.
    """

    D_t1: sp.csr_matrix
    D_t2: sp.csr_matrix

    def gradient(self, values: np.ndarray, frames: NodeFrames) -> np.ndarray:
        """Cartesian surface gradient ``(N, 3)`` of nodal ``values``."""
        return (self.D_t1 @ values)[:, None] * frames.t1 + (self.D_t2 @ values)[:, None] * frames.t2


def _quantise_row(coeffs: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(coeffs))
    if peak == 0.0:
        return coeffs
    step = 2.0 ** (int(np.ceil(np.log2(peak))) - _QUANT_BITS)
    return np.round(coeffs / step) * step


def tangential_ops(mesh: QuadMesh, frames: NodeFrames, rcond: float = 1e-10) -> TangentialOps:
    """Least-squares surface gradient at every node.

    Every adjacent element supplies the derivatives of its own interpolant
    along ``d/dxi`` and ``d/deta`` at the node.  The tangential gradient
    ``g = a t1 + b t2`` is fitted to these directional derivatives in the
    least-squares sense, which is linear in the nodal values.

    Raises
    ------
    DegenerateFrameError
        If a node's directional data do not span the tangent plane.
    """
    ptr, adj_elem, adj_local = node_element_incidence(mesh)
    dxi, deta = shape_derivatives(LOCAL_NODE_COORDS[:, 0], LOCAL_NODE_COORDS[:, 1])
    dxi = dxi.T  # (local node l, shape j)
    deta = deta.T
    xe_all = mesh.nodes[mesh.elements]
    rows1, cols1, vals1 = [], [], []
    rows2, cols2, vals2 = [], [], []
    for i in range(mesh.n_nodes):
        es = adj_elem[ptr[i] : ptr[i + 1]]
        ls = adj_local[ptr[i] : ptr[i + 1]]
        m = len(es)
        A = np.empty((2 * m, 2))
        cols = mesh.elements[es].ravel()
        C = np.zeros((2 * m, 6 * m))
        t1, t2 = frames.t1[i], frames.t2[i]
        for a, (e, l) in enumerate(zip(es, ls)):
            xe = xe_all[e]
            g1 = dxi[l] @ xe
            g2 = deta[l] @ xe
            A[2 * a] = (g1 @ t1, g1 @ t2)
            A[2 * a + 1] = (g2 @ t1, g2 @ t2)
            C[2 * a, 6 * a : 6 * a + 6] = dxi[l]
            C[2 * a + 1, 6 * a : 6 * a + 6] = deta[l]
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= rcond * sv[0]:
            raise DegenerateFrameError(f"tangential derivative rank loss at node {i}")
        coef = np.linalg.lstsq(A, C, rcond=None)[0]  # (2, 6m)
        ucols, inv = np.unique(cols, return_inverse=True)
        for which, (rows, cl, vl) in enumerate(((rows1, cols1, vals1), (rows2, cols2, vals2))):
            merged = np.zeros(len(ucols))
            np.add.at(merged, inv, coef[which])
            off = ucols != i
            q = _quantise_row(merged[off])
            rows.extend([i] * (len(q) + 1))
            cl.extend(ucols[off].tolist() + [i])
            vl.extend(q.tolist() + [-float(np.sum(q))])
    n = mesh.n_nodes
    D1 = sp.csr_matrix((vals1, (rows1, cols1)), shape=(n, n))
    D2 = sp.csr_matrix((vals2, (rows2, cols2)), shape=(n, n))
    D1.sort_indices()
    D2.sort_indices()
    return TangentialOps(D1, D2)
