"""Quadratic surface mesh container, validation, shape evaluation and file I/O."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import (
    MeshParseError,
    MeshTopologyError,
    UnsupportedElementError,
)
from .quadrature import gauss_rule
from .shape import LOCAL_NODE_COORDS, shape_derivatives, shape_functions

logger = logging.getLogger(__name__)

# Corner edges of the reference triangle and the mid-edge node on each.
_EDGES = ((0, 1, 3), (1, 2, 4), (2, 0, 5))


@dataclass(frozen=True, eq=False)
class QuadMesh:
    """Closed surface mesh of six-node quadratic triangles.

    Parameters
    ----------
    nodes : array_like, shape (N, 3)
        Node coordinates.
    elements : array_like of int, shape (E, 6)
        Zero-based node indices; corners 0-2, then mid-edge nodes 3-5.
    characteristic_length : float
        The length ``a`` used in ``ka`` and in the Burton-Miller coupling.
    closed : bool
        Require a closed, consistently oriented surface.  Set to False only
        for auxiliary open patches (for example flat test plates).
    tags : array_like of int, optional
        Per-element integer labels (generators use them to mark surface
        parts such as the resonator cavity wall).

    Raises
    ------
    MeshTopologyError
        If indices are out of range, nodes are unreferenced, the surface is
        open or non-orientable (when ``closed``), or an element Jacobian
        vanishes.
    """

    nodes: np.ndarray
    elements: np.ndarray
    characteristic_length: float = 1.0
    closed: bool = True
    tags: Optional[np.ndarray] = None
    _fingerprint: str = field(default="", init=False, repr=False)

    def __post_init__(self) -> None:
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        elements = np.ascontiguousarray(self.elements, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] != 3:
            raise MeshTopologyError(f"nodes must have shape (N, 3), got {nodes.shape}")
        if elements.ndim != 2 or elements.shape[1] != 6:
            raise MeshTopologyError(
                f"elements must have shape (E, 6), got {elements.shape}"
            )
        if not np.all(np.isfinite(nodes)):
            raise MeshTopologyError("node coordinates must be finite")
        if not self.characteristic_length > 0:
            raise MeshTopologyError("characteristic_length must be positive")
        tags = self.tags
        if tags is None:
            tags = np.zeros(len(elements), dtype=np.int64)
        else:
            tags = np.ascontiguousarray(tags, dtype=np.int64)
            if tags.shape != (len(elements),):
                raise MeshTopologyError("tags must have one entry per element")
        nodes.setflags(write=False)
        elements.setflags(write=False)
        tags.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "tags", tags)
        object.__setattr__(self, "characteristic_length", float(self.characteristic_length))
        _check_indices(nodes, elements)
        if self.closed:
            _check_closed(elements)
        _check_jacobians(nodes, elements)
        digest = hashlib.sha256()
        digest.update(nodes.tobytes())
        digest.update(elements.tobytes())
        object.__setattr__(self, "_fingerprint", digest.hexdigest()[:16])

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def fingerprint(self) -> str:
        """Short SHA-256 digest of coordinates and connectivity."""
        return self._fingerprint

    def element_coords(self, elem: int) -> np.ndarray:
        """Coordinates of the six nodes of one element, shape (6, 3)."""
        return self.nodes[self.elements[elem]]

    def total_area(self) -> float:
        """Surface area by degree-8 quadrature."""
        return float(area_elements(self, gauss_rule(8)).sum())

    def enclosed_volume(self) -> float:
        """Volume enclosed by the surface, from the divergence theorem."""
        rule = gauss_rule(8)
        pos, _, _, normal, jac = _eval_all(self, rule.xi, rule.eta)
        return float(np.sum((pos * normal).sum(-1) * jac * rule.weights) / 3.0)


def _check_indices(nodes: np.ndarray, elements: np.ndarray) -> None:
    if len(elements) == 0:
        raise MeshTopologyError("mesh has no elements")
    if elements.min() < 0 or elements.max() >= len(nodes):
        raise MeshTopologyError("element references a node index out of range")
    used = np.zeros(len(nodes), dtype=bool)
    used[elements.ravel()] = True
    if not used.all():
        missing = int(np.flatnonzero(~used)[0])
        raise MeshTopologyError(f"node {missing} is not referenced by any element")
    for e, row in enumerate(elements):
        if len(set(row.tolist())) != 6:
            raise MeshTopologyError(f"element {e} repeats a node index")


def _check_closed(elements: np.ndarray) -> None:
    directed: dict[tuple[int, int], tuple[int, int]] = {}
    for e, row in enumerate(elements):
        for a, b, m in _EDGES:
            key = (int(row[a]), int(row[b]))
            if key in directed:
                raise MeshTopologyError(
                    f"non-orientable surface: directed edge {key} used by "
                    f"elements {directed[key][0]} and {e}"
                )
            directed[key] = (e, int(row[m]))
    for (a, b), (e, mid) in directed.items():
        twin = directed.get((b, a))
        if twin is None:
            raise MeshTopologyError(
                f"open surface: edge ({a}, {b}) of element {e} has no neighbour"
            )
        if twin[1] != mid:
            raise MeshTopologyError(
                f"edge ({a}, {b}) uses different mid-edge nodes in elements "
                f"{e} and {twin[0]}"
            )


def _check_jacobians(nodes: np.ndarray, elements: np.ndarray) -> None:
    rule = gauss_rule(4)
    xi = np.concatenate([rule.xi, LOCAL_NODE_COORDS[:, 0]])
    eta = np.concatenate([rule.eta, LOCAL_NODE_COORDS[:, 1]])
    dn_dxi, dn_deta = shape_derivatives(xi, eta)
    xe = nodes[elements]  # (E, 6, 3)
    t1 = np.einsum("jq,ejc->eqc", dn_dxi, xe)
    t2 = np.einsum("jq,ejc->eqc", dn_deta, xe)
    jac = np.linalg.norm(np.cross(t1, t2), axis=-1)
    scale = np.einsum("ejc,ejc->e", xe - xe.mean(1, keepdims=True), xe - xe.mean(1, keepdims=True))
    bad = jac <= 1e-12 * np.maximum(scale[:, None], 1e-300)
    if bad.any():
        e = int(np.flatnonzero(bad.any(axis=1))[0])
        raise MeshTopologyError(f"element {e} has a vanishing Jacobian")


def _eval_all(mesh: QuadMesh, xi, eta):
    """Vectorised shape evaluation over all elements at shared local points."""
    n = shape_functions(xi, eta)
    dxi, deta = shape_derivatives(xi, eta)
    xe = mesh.nodes[mesh.elements]
    pos = np.einsum("jq,ejc->eqc", n, xe)
    t1 = np.einsum("jq,ejc->eqc", dxi, xe)
    t2 = np.einsum("jq,ejc->eqc", deta, xe)
    cross = np.cross(t1, t2)
    jac = np.linalg.norm(cross, axis=-1)
    normal = cross / jac[..., None]
    return pos, t1, t2, normal, jac


def area_elements(mesh: QuadMesh, rule) -> np.ndarray:
    """Per-element areas with the given rule, shape (E,)."""
    _, _, _, _, jac = _eval_all(mesh, rule.xi, rule.eta)
    return jac @ rule.weights


def shape_eval(mesh: QuadMesh, elem: int, xi: float, eta: float):
    """Evaluate the element map at one reference point.

    Parameters
    ----------
    mesh : QuadMesh
    elem : int
        Element index.
    xi, eta : float
        Reference coordinates inside the reference triangle.

    Returns
    -------
    position : ndarray (3,)
    dxi, deta : ndarray (3,)
        Tangent vectors d position / d xi and d position / d eta.
    normal : ndarray (3,)
        Unit normal ``dxi x deta / |dxi x deta|``, outward for an
        outward-oriented mesh.
    area_element : float
        ``|dxi x deta|``.
    """
    xe = mesh.nodes[mesh.elements[elem]]
    n = shape_functions(xi, eta)
    d1, d2 = shape_derivatives(xi, eta)
    pos = n @ xe
    t1 = d1 @ xe
    t2 = d2 @ xe
    cross = np.cross(t1, t2)
    jac = float(np.linalg.norm(cross))
    return pos, t1, t2, cross / jac, jac


# --------------------------------------------------------------------------
# File formats
# --------------------------------------------------------------------------


def load_mesh(
    path,
    format: str = "native",
    characteristic_length: float = 1.0,
) -> QuadMesh:
    """Read and validate a quadratic surface mesh.

    Parameters
    ----------
    path : str or Path
        Mesh file.
    format : {"native", "msh"}
        ``native`` is the plain-text layout written by :func:`save_mesh`:
        a line ``N E``, then ``N`` lines ``x y z``, then ``E`` lines of six
        zero-based node indices.  ``msh`` reads gmsh version-2 ASCII files
        with 6-node triangles (element type 9) only.
    characteristic_length : float
        Length ``a`` attached to the returned mesh.

    Raises
    ------
    MeshParseError
        Malformed or empty file.
    MeshTopologyError
        Open or non-orientable surface.
    UnsupportedElementError
        msh file with element types other than 9.
    """
    text = Path(path).read_text()
    if format in ("native", "native-text"):
        nodes, elements = _parse_native(text)
    elif format in ("msh", "msh-v2", "gmsh"):
        nodes, elements = _parse_msh2(text)
    else:
        raise MeshParseError(f"unknown mesh format {format!r}")
    mesh = QuadMesh(nodes, elements, characteristic_length)
    logger.info("loaded %s: %d nodes, %d elements", path, mesh.n_nodes, mesh.n_elements)
    return mesh


def save_mesh(mesh: QuadMesh, path) -> None:
    """Write ``mesh`` in the native text format with full float precision."""
    lines = [f"{mesh.n_nodes} {mesh.n_elements}"]
    lines += [" ".join(f"{v:.17g}" for v in xyz) for xyz in mesh.nodes]
    lines += [" ".join(str(int(i)) for i in row) for row in mesh.elements]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_native(text: str):
    tokens = text.split()
    if len(tokens) < 2:
        raise MeshParseError("empty mesh file")
    try:
        n_nodes, n_elem = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise MeshParseError(f"bad header: {exc}") from exc
    if n_nodes <= 0 or n_elem <= 0:
        raise MeshParseError("header counts must be positive")
    expected = 2 + 3 * n_nodes + 6 * n_elem
    if len(tokens) != expected:
        raise MeshParseError(
            f"expected {expected} tokens for {n_nodes} nodes and {n_elem} "
            f"elements, found {len(tokens)}"
        )
    try:
        nodes = np.array(tokens[2 : 2 + 3 * n_nodes], dtype=float).reshape(n_nodes, 3)
        elements = np.array(
            [int(t) for t in tokens[2 + 3 * n_nodes :]], dtype=np.int64
        ).reshape(n_elem, 6)
    except ValueError as exc:
        raise MeshParseError(f"non-numeric entry: {exc}") from exc
    return nodes, elements


def _section(lines: list[str], name: str) -> list[str]:
    try:
        start = lines.index(f"${name}")
        end = lines.index(f"$End{name}", start)
    except ValueError as exc:
        raise MeshParseError(f"missing ${name} block") from exc
    return lines[start + 1 : end]


def _parse_msh2(text: str):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MeshParseError("empty mesh file")
    if "$MeshFormat" in lines:
        fmt = _section(lines, "MeshFormat")
        if not fmt or not fmt[0].split()[0].startswith("2"):
            raise MeshParseError("only msh version 2 ASCII files are supported")
    try:
        node_block = _section(lines, "Nodes")
        n_nodes = int(node_block[0])
        ids = []
        coords = []
        for ln in node_block[1 : 1 + n_nodes]:
            parts = ln.split()
            ids.append(int(parts[0]))
            coords.append([float(v) for v in parts[1:4]])
        if len(coords) != n_nodes:
            raise MeshParseError("truncated $Nodes block")
        index = {tag: i for i, tag in enumerate(ids)}
        elem_block = _section(lines, "Elements")
        n_elem = int(elem_block[0])
        elements = []
        for ln in elem_block[1 : 1 + n_elem]:
            parts = [int(v) for v in ln.split()]
            etype, ntags = parts[1], parts[2]
            if etype != 9:
                raise UnsupportedElementError(
                    f"element {parts[0]} has gmsh type {etype}; only type 9 "
                    "(6-node triangle) is supported"
                )
            conn = parts[3 + ntags : 3 + ntags + 6]
            elements.append([index[t] for t in conn])
    except (IndexError, ValueError, KeyError) as exc:
        raise MeshParseError(f"malformed msh file: {exc}") from exc
    if not elements:
        raise MeshParseError("no elements in msh file")
    return np.array(coords, dtype=float), np.array(elements, dtype=np.int64)


def save_msh2(mesh: QuadMesh, path) -> None:
    """Write ``mesh`` as a gmsh version-2 ASCII file (element type 9)."""
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(mesh.n_nodes)]
    out += [
        f"{i + 1} " + " ".join(f"{v:.17g}" for v in xyz)
        for i, xyz in enumerate(mesh.nodes)
    ]
    out += ["$EndNodes", "$Elements", str(mesh.n_elements)]
    out += [
        f"{e + 1} 9 2 0 {int(mesh.tags[e])} " + " ".join(str(int(i) + 1) for i in row)
        for e, row in enumerate(mesh.elements)
    ]
    out.append("$EndElements")
    Path(path).write_text("\n".join(out) + "\n")
