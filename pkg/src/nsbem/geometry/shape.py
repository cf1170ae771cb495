"""Six-node quadratic Lagrange triangle.

Reference triangle (0,0), (1,0), (0,1).  Local node order: corners 0, 1, 2,
then mid-edge nodes 3 (edge 0-1), 4 (edge 1-2) and 5 (edge 2-0).
"""

from __future__ import annotations

import numpy as np

#: Reference coordinates of the six local nodes.
LOCAL_NODE_COORDS = np.array(
    [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]
)

# Second derivatives are constant for quadratic shape functions.
# Columns: d2/dxi2, d2/dxi deta, d2/deta2.
_SECOND = np.array(
    [
        [4.0, 4.0, 4.0],
        [4.0, 0.0, 0.0],
        [0.0, 0.0, 4.0],
        [-8.0, -4.0, 0.0],
        [0.0, 4.0, 0.0],
        [0.0, -4.0, -8.0],
    ]
)


def shape_functions(xi, eta):
    """Values of the six shape functions.

    Parameters
    ----------
    xi, eta : float or ndarray
        Reference coordinates (broadcastable).

    Returns
    -------
    ndarray
        Shape ``(6,) + broadcast_shape``.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = 1.0 - xi - eta
    return np.array(
        [
            lam * (2.0 * lam - 1.0),
            xi * (2.0 * xi - 1.0),
            eta * (2.0 * eta - 1.0),
            4.0 * xi * lam,
            4.0 * xi * eta,
            4.0 * eta * lam,
        ]
    )


def shape_derivatives(xi, eta):
    """First derivatives of the shape functions.

    Returns
    -------
    dxi, deta : ndarray
        Each of shape ``(6,) + broadcast_shape``.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = 1.0 - xi - eta
    zero = np.zeros_like(xi + eta)
    dxi = np.array(
        [
            1.0 - 4.0 * lam,
            4.0 * xi - 1.0,
            zero,
            4.0 * (lam - xi),
            4.0 * eta,
            -4.0 * eta,
        ]
    )
    deta = np.array(
        [
            1.0 - 4.0 * lam,
            zero,
            4.0 * eta - 1.0,
            -4.0 * xi,
            4.0 * xi,
            4.0 * (lam - eta),
        ]
    )
    return dxi, deta


def shape_second_derivatives():
    """Constant second derivatives, shape ``(6, 3)`` ordered (xx, xy, yy)."""
    return _SECOND.copy()
