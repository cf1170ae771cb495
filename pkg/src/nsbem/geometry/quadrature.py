"""Quadrature rules on the reference triangle.

The symmetric rules come from a frozen table generated offline by
``tools/gen_triangle_rules.py``.  Every rule has positive weights and
interior points.  Requests for a degree without a tabulated rule of its
own (3, 7 and 11) are served by the next higher tabulated rule, so a rule
is always exact to at least the requested degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import QuadratureError
from ._triangle_rules import RULES

MIN_DEGREE = 2
MAX_DEGREE = 14


@dataclass(frozen=True)
class TriangleQuadrature:
    """Symmetric quadrature rule on the reference triangle.

    Attributes
    ----------
    points : ndarray, shape (n, 3)
        Barycentric coordinates ``(1 - xi - eta, xi, eta)``.
    weights : ndarray, shape (n,)
        Positive weights summing to 1/2, the reference-triangle area.
    degree : int
        Highest total polynomial degree integrated exactly.
    """

    points: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def xi(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def eta(self) -> np.ndarray:
        return self.points[:, 2]

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=None)
def gauss_rule(degree: int) -> TriangleQuadrature:
    """Return a symmetric Gauss rule exact for polynomials up to ``degree``.

    Parameters
    ----------
    degree : int
        Requested polynomial degree, 2 to 14 inclusive.

    Raises
    ------
    QuadratureError
        If the degree is outside the supported range.

    Examples
    --------
    >>> rule = gauss_rule(2)
    >>> len(rule), float(rule.weights.sum())
    (3, 0.5)
    """
    if not isinstance(degree, (int, np.integer)) or isinstance(degree, bool):
        raise QuadratureError(f"degree must be an integer, got {degree!r}")
    if degree < MIN_DEGREE or degree > MAX_DEGREE:
        raise QuadratureError(
            f"unsupported triangle rule degree {degree}; "
            f"supported range is {MIN_DEGREE}..{MAX_DEGREE}"
        )
    exact = min(d for d in RULES if d >= degree)
    pts, wts = RULES[exact]
    xe = np.array(pts, dtype=float)
    bary = np.column_stack([1.0 - xe[:, 0] - xe[:, 1], xe[:, 0], xe[:, 1]])
    bary.setflags(write=False)
    w = np.array(wts, dtype=float)
    w.setflags(write=False)
    return TriangleQuadrature(points=bary, weights=w, degree=exact)


@lru_cache(maxsize=None)
def gauss_legendre_unit(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if order < 1:
        raise QuadratureError(f"Gauss-Legendre order must be positive, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w
