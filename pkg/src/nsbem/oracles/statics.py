"""Closed-form electrostatic fields of a sphere in a uniform field."""

from __future__ import annotations

import numpy as np


def _dipole_field(points, p):
    x = np.atleast_2d(np.asarray(points, float))
    r = np.linalg.norm(x, axis=1)[:, None]
    rhat = x / r
    return (3.0 * (rhat @ p)[:, None] * rhat - p) / r**3


def conducting_sphere_field(points, e0, radius: float = 1.0) -> np.ndarray:
    """Scattered field of a grounded conducting sphere in a uniform ``e0``.

    The induced dipole is ``radius**3 * e0``.

    Examples
    --------
    >>> import numpy as np
    >>> e = conducting_sphere_field([[0, 0, 2.0]], np.array([0, 0, 1.0]))
    >>> float(e[0, 2])
    0.25
    """
    e0 = np.asarray(e0)
    return _dipole_field(points, radius**3 * e0)


def conducting_sphere_surface_normal(normals, e0) -> np.ndarray:
    """Scattered normal field ``2 e0 . n`` on the conducting sphere surface.

    The total normal field there is ``3 e0 . n``.
    """
    return 2.0 * (np.asarray(normals, float) @ np.asarray(e0))


def dielectric_sphere_field(points, e0, eps_ratio: float, radius: float = 1.0) -> np.ndarray:
    """Electrostatic field of a dielectric sphere in a uniform ``e0``.

    Inside, the total field is uniform: ``3 / (eps_ratio + 2) * e0``.
    Outside, the scattered field is a dipole of moment
    ``(eps_ratio - 1) / (eps_ratio + 2) * radius**3 * e0``.  Points inside
    receive the total field, points outside the scattered field.
    """
    e0 = np.asarray(e0)
    x = np.atleast_2d(np.asarray(points, float))
    r = np.linalg.norm(x, axis=1)
    out = np.empty((len(x), 3), dtype=np.result_type(e0, float))
    inside = r < radius
    out[inside] = 3.0 / (eps_ratio + 2.0) * e0
    if np.any(~inside):
        p = (eps_ratio - 1.0) / (eps_ratio + 2.0) * radius**3 * e0
        out[~inside] = _dipole_field(x[~inside], p)
    return out
