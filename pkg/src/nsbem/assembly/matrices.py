"""Dense collocation matrices of the desingularised boundary integral equation.

Sign convention
---------------
Meshes carry body-outward normals ``n``.  All matrices returned here act
on nodal ``phi`` and on the nodal normal derivative ``dphi/dn`` taken along
that same body-outward normal, for both interior and exterior problems::

    H @ phi = G @ dphi_dn

For an interior problem the domain normal coincides with ``n``.  For an
exterior problem it is ``-n``; the kernels are then evaluated with the
domain normal, the free term ``4 pi`` is added to the diagonal of ``H`` and
``G`` is negated so that it multiplies the body-normal derivative.  Because
``H`` is linear and ``G`` even in the normals, this gives
``H_ext = 4 pi I - H_int`` and ``G_ext = -G_int`` on the same mesh.
"""

from __future__ import annotations

import logging
import math
import struct
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import QuadratureError
from ..geometry.frames import NodeFrames
from ..geometry.mesh import QuadMesh
from . import _core
from .quadrature_data import MeshQuadrature, QuadratureConfig
from .tangential import TangentialOps, tangential_ops

logger = logging.getLogger(__name__)

_CHUNK = 8


@dataclass(eq=False)
class BemMatrices:
    """Collocation matrices for one wavenumber.

    Attributes
    ----------
    H, G : ndarray (N, N) complex or None
        ``H @ phi = G @ dphi_dn``; either may be omitted when only a
        product with ``G`` was requested.
    k : complex
    exterior : bool
    mesh_fingerprint : str
    g_times_rhs : ndarray (N, m) or None
        ``G @ rhs`` computed during assembly when ``rhs`` was supplied.
    assembly_seconds : float
    """

    H: Optional[np.ndarray]
    G: Optional[np.ndarray]
    k: complex
    exterior: bool
    mesh_fingerprint: str
    g_times_rhs: Optional[np.ndarray] = None
    assembly_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        for m in (self.H, self.G, self.g_times_rhs):
            if m is not None:
                return m.shape[0]
        return 0


def _prepare(mesh, frames, quadrature):
    if frames is not None and frames.mesh_fingerprint and frames.mesh_fingerprint != mesh.fingerprint:
        raise ValueError("frames were computed for a different mesh")
    if isinstance(quadrature, MeshQuadrature):
        if quadrature.mesh is not mesh:
            raise ValueError("quadrature data belongs to a different mesh")
        return quadrature
    return MeshQuadrature(mesh, quadrature)


def _check_status(status: np.ndarray, what: str) -> None:
    bad = np.flatnonzero(status)
    if bad.size:
        code = int(status[bad[0]])
        reason = "depth limit" if code == _core.STATUS_DEPTH else "point buffer capacity"
        raise QuadratureError(
            f"{what}: near-element subdivision exceeded the {reason} at row "
            f"{int(bad[0])} ({bad.size} rows affected)"
        )


def assemble(
    mesh: QuadMesh,
    frames: NodeFrames,
    k: complex,
    exterior: bool = True,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    *,
    store_h: bool = True,
    store_g: bool = True,
    rhs: Optional[np.ndarray] = None,
) -> BemMatrices:
    """Assemble the desingularised ``H`` and ``G`` matrices.

    Each row integrates, over the whole surface, ``dG_k/dn`` and ``G_k``
    against the shape functions and subtracts the Laplace terms built from
    ``g = 1`` and ``f = n0 . (x - x0)``.  The subtraction integrals multiply
    only the row's own unknowns, so they are lumped into the diagonal.

    Parameters
    ----------
    mesh, frames : QuadMesh, NodeFrames
    k : complex
        Wavenumber.
    exterior : bool
        Exterior problem (adds the ``4 pi`` free term).
    quadrature : QuadratureConfig or MeshQuadrature, optional
        Pass a :class:`MeshQuadrature` to reuse precomputed data across
        wavenumbers.
    store_h, store_g : bool
        Which dense matrices to keep.
    rhs : ndarray (N,) or (N, m), optional
        If given, ``G @ rhs`` is accumulated row by row (useful with
        ``store_g=False`` to halve the memory footprint).

    Returns
    -------
    BemMatrices

    Raises
    ------
    QuadratureError
        If near-element subdivision exceeds its depth limit.
    """
    t0 = time.perf_counter()
    mq = _prepare(mesh, frames, quadrature)
    cfg = mq.config
    n = mesh.n_nodes
    k = complex(k)
    sigma = -1.0 if exterior else 1.0
    if rhs is not None:
        B = np.asarray(rhs, dtype=complex)
        squeeze = B.ndim == 1
        B = np.ascontiguousarray(B.reshape(n, -1))
    else:
        squeeze = False
        B = np.zeros((n, 0), dtype=complex)
    nb = B.shape[1]
    if nb:
        BQd = mq.interpolate(B, mq.distant)
        BQf = mq.interpolate(B, mq.far)
    else:
        BQd = np.zeros((mesh.n_elements, 1, 1), dtype=complex)
        BQf = BQd
    H = np.zeros((n, n), dtype=complex) if store_h else np.zeros((1, 1), dtype=complex)
    G = np.zeros((n, n), dtype=complex) if store_g else np.zeros((1, 1), dtype=complex)
    GB = np.zeros((n, max(nb, 1)), dtype=complex)
    status = _core.assemble_standard_rows(
        mesh.nodes, mesh.elements, frames.normal, mq.centers, mq.radii,
        mq.distant.X, mq.distant.N, mq.distant.W, mq.distant.S,
        mq.far.X, mq.far.N, mq.far.W, mq.far.S,
        BQd, BQf, B,
        mq.rule_xi, mq.rule_eta, mq.rule_w, mq.gl_x, mq.gl_w,
        cfg.near_ratio, cfg.distant_ratio, cfg.max_depth, cfg.max_points,
        k, sigma, bool(exterior), H, G, GB, bool(store_h), bool(store_g), _CHUNK,
    )
    _check_status(status, "assembly")
    gb = None
    if nb:
        gb = GB[:, 0] if squeeze else GB[:, :nb]
    dt = time.perf_counter() - t0
    logger.info("assembled N=%d k=%s exterior=%s in %.2f s", n, k, exterior, dt)
    return BemMatrices(
        H if store_h else None,
        G if store_g else None,
        k,
        bool(exterior),
        mesh.fingerprint,
        gb,
        dt,
    )


def default_beta(characteristic_length: float, k: complex) -> float:
    """Burton-Miller coupling ``min(0.5 a, 1/|k|)``.

    Examples
    --------
    >>> default_beta(1.0, 1.0), default_beta(1.0, 4.0)
    (0.5, 0.25)
    """
    a = float(characteristic_length)
    kk = abs(complex(k))
    if kk == 0.0:
        return 0.5 * a
    return min(0.5 * a, 1.0 / kk)


BM_VARIANTS = ("taylor", "printed")


def assemble_burton_miller(
    mesh: QuadMesh,
    frames: NodeFrames,
    k: complex,
    beta: Optional[float] = None,
    exterior: bool = True,
    quadrature: QuadratureConfig | MeshQuadrature | None = None,
    *,
    variant: str = "taylor",
    tangential: Optional[TangentialOps] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Desingularised Burton-Miller pair ``(L, R)`` with ``L @ phi = R @ dphi_dn``.

    The standard equation is combined with ``i beta`` times the
    normal-derivative (hypersingular) equation.  In the hypersingular part
    the ``k^2/2 (n.n0) G_0`` singularity of the kernel difference is removed
    with the harmonic function ``k^2/2 phi(x0) n0.(x - x0)``.

    Two regularisations of the ``d2G_0/dn dn0`` part are available:

    ``"taylor"`` (default)
        Subtracts the harmonic first-order Taylor expansion
        ``psi = phi(x0) + grad phi(x0) . (x - x0)``, whose surface gradient
        comes from :func:`tangential_ops`.  The resulting equation is an
        exact identity for every exterior Helmholtz field.
    ``"printed"``
        The variant that keeps only ``phi(x) [d2G_k - d2G_0]``.  It omits
        ``int (phi - phi0) d2G_0 dS``, is not an identity, and is kept for
        comparison only.

    The interpolated field and the mesh are only C0 at a node.  On the
    elements that contain the collocation node, the kernels involving
    ``n0`` therefore use that element's own normal at the node, and the
    Taylor term uses that element's own gradient there.  This keeps each
    element integral finite, so the result does not depend on the
    near-node quadrature order.

    Parameters
    ----------
    beta : float, optional
        Coupling length; defaults to :func:`default_beta`.
    exterior : bool
        Include the ``4 pi`` terms of the exterior problem.

    Returns
    -------
    L, R : ndarray (N, N) complex
        ``R`` multiplies the body-outward normal derivative.
    """
    if variant not in BM_VARIANTS:
        raise ValueError(f"variant must be one of {BM_VARIANTS}")
    if beta is None:
        beta = default_beta(mesh.characteristic_length, k)
    if not beta > 0:
        raise ValueError("beta must be positive")
    t0 = time.perf_counter()
    mq = _prepare(mesh, frames, quadrature)
    cfg = mq.config
    n = mesh.n_nodes
    sigma = -1.0 if exterior else 1.0
    taylor = 1.0 if variant == "taylor" else 0.0
    L = np.zeros((n, n), dtype=complex)
    R = np.zeros((n, n), dtype=complex)
    CT = np.zeros((n, 2), dtype=complex)
    status = _core.assemble_bm_rows(
        mesh.nodes, mesh.elements, frames.normal, frames.t1, frames.t2, mq.centers, mq.radii,
        mq.distant.X, mq.distant.N, mq.distant.W, mq.distant.S,
        mq.far.X, mq.far.N, mq.far.W, mq.far.S,
        mq.rule_xi, mq.rule_eta, mq.rule_w, mq.gl_x, mq.gl_w,
        cfg.near_ratio, cfg.distant_ratio, cfg.max_depth, cfg.max_points,
        complex(k), float(beta), sigma, bool(exterior), taylor, L, R, CT, _CHUNK,
    )
    _check_status(status, "Burton-Miller assembly")
    if taylor:
        ops = tangential if tangential is not None else tangential_ops(mesh, frames)
        for col, D in enumerate((ops.D_t1, ops.D_t2)):
            coo = D.tocoo()
            np.add.at(L, (coo.row, coo.col), CT[coo.row, col] * coo.data)
    logger.info(
        "Burton-Miller (%s) N=%d k=%s beta=%g in %.2f s",
        variant, n, k, beta, time.perf_counter() - t0,
    )
    return L, R


def dump_matrix(path, matrix: np.ndarray) -> None:
    """Write a dense complex matrix in the documented binary layout.

    Layout (little-endian): ``uint64 rows``, ``uint64 cols``, then
    ``rows * cols`` complex values in row-major order, each stored as two
    ``float64`` (real, imaginary).
    """
    m = np.ascontiguousarray(matrix, dtype="<c16")
    with open(Path(path), "wb") as fh:
        fh.write(struct.pack("<QQ", *m.shape))
        fh.write(m.tobytes(order="C"))


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by :func:`dump_matrix`."""
    with open(Path(path), "rb") as fh:
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != rows * cols:
        raise ValueError("truncated matrix dump")
    return data.reshape(rows, cols).astype(complex)


FOUR_PI = 4.0 * math.pi
