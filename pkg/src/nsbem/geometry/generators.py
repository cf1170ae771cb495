"""Mesh generators: icosahedral sphere and flat test plate.

The axisymmetric generators (Helmholtz resonator, paraboloidal dishes)
live in :mod:`nsbem.geometry.revolution`.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import GeometryError
from .mesh import QuadMesh

logger = logging.getLogger(__name__)


def _icosahedron():
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=float,
    )
    faces = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ],
        dtype=np.int64,
    )
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    return verts, faces


def _midpoint_index(cache, verts, a, b):
    key = (a, b) if a < b else (b, a)
    idx = cache.get(key)
    if idx is None:
        p = verts[a] + verts[b]
        verts.append(p / np.linalg.norm(p))
        idx = len(verts) - 1
        cache[key] = idx
    return idx


def generate_sphere_mesh(
    radius: float = 1.0,
    refinement: int = 2,
    center=(0.0, 0.0, 0.0),
) -> QuadMesh:
    """Quadratic sphere mesh from a subdivided icosahedron.

    Every subdivision splits each triangle into four and projects the new
    vertices onto the sphere.  Mid-edge nodes of the final quadratic
    elements are projected as well, so all nodes lie on the sphere.

    Parameters
    ----------
    radius : float
        Sphere radius; also used as the characteristic length.
    refinement : int
        Number of subdivisions; ``20 * 4**refinement`` elements and
        ``40 * 4**refinement + 2`` nodes.
    center : sequence of 3 floats

    Examples
    --------
    >>> m = generate_sphere_mesh(1.0, 0)
    >>> m.n_elements, m.n_nodes
    (20, 42)
    """
    if not radius > 0:
        raise GeometryError("radius must be positive")
    if int(refinement) != refinement or refinement < 0:
        raise GeometryError("refinement must be a non-negative integer")
    v0, faces = _icosahedron()
    verts = list(v0)
    for _ in range(int(refinement)):
        cache: dict = {}
        new_faces = []
        for a, b, c in faces:
            ab = _midpoint_index(cache, verts, a, b)
            bc = _midpoint_index(cache, verts, b, c)
            ca = _midpoint_index(cache, verts, c, a)
            new_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = np.array(new_faces, dtype=np.int64)
    cache = {}
    elements = np.empty((len(faces), 6), dtype=np.int64)
    for e, (a, b, c) in enumerate(faces):
        elements[e] = (
            a,
            b,
            c,
            _midpoint_index(cache, verts, a, b),
            _midpoint_index(cache, verts, b, c),
            _midpoint_index(cache, verts, c, a),
        )
    unit = np.array(verts)
    unit /= np.linalg.norm(unit, axis=1)[:, None]
    nodes = radius * unit + np.asarray(center, dtype=float)
    mesh = QuadMesh(nodes, elements, characteristic_length=radius)
    logger.debug("sphere mesh r=%g ref=%d: N=%d E=%d", radius, refinement, mesh.n_nodes, mesh.n_elements)
    return mesh


def generate_plate_mesh(
    width: float = 1.0,
    divisions: int = 4,
    z: float = 0.0,
) -> QuadMesh:
    """Open flat square plate in the plane ``z``, normal along +z.

    The plate spans ``[0, width]^2`` and is split into ``2 * divisions**2``
    straight quadratic triangles.  The result is an open surface
    (``closed=False``), useful for checking frames and tangential
    derivatives on a plane.
    """
    if divisions < 1 or not width > 0:
        raise GeometryError("plate needs positive width and at least one division")
    m = 2 * divisions
    grid = np.linspace(0.0, width, m + 1)
    xx, yy = np.meshgrid(grid, grid, indexing="ij")
    nodes = np.column_stack([xx.ravel(), yy.ravel(), np.full(xx.size, z)])

    def idx(i, j):
        return i * (m + 1) + j

    elements = []
    for i in range(0, m, 2):
        for j in range(0, m, 2):
            p00, p20, p02, p22 = idx(i, j), idx(i + 2, j), idx(i, j + 2), idx(i + 2, j + 2)
            elements.append([p00, p20, p22, idx(i + 1, j), idx(i + 2, j + 1), idx(i + 1, j + 1)])
            elements.append([p00, p22, p02, idx(i + 1, j + 1), idx(i + 1, j + 2), idx(i, j + 1)])
    return QuadMesh(nodes, np.array(elements), characteristic_length=width, closed=False)


def sphere_points(count: int, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Nearly uniform points on a sphere (Fibonacci lattice).

    Examples
    --------
    >>> p = sphere_points(20, 2.0)
    >>> p.shape, bool(np.allclose(np.linalg.norm(p, axis=1), 2.0))
    ((20, 3), True)
    """
    if count < 1:
        raise ValueError("count must be positive")
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    return radius * pts + np.asarray(center, float)
