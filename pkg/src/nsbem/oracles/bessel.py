"""Spherical Bessel and Hankel functions by recurrence.

``j_n`` is obtained from the continued fraction for ``j_n / j_{n-1}``
(backward recurrence, stable for ``n > x``) and normalised with
``j_0 = sin(x)/x``.  ``y_n`` uses the forward recurrence, which is stable
because ``|y_n|`` grows with ``n``.
"""

from __future__ import annotations

import numpy as np


def _as_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=complex)
    if np.any(arr == 0):
        raise ValueError("argument must be nonzero")
    return arr


def spherical_jn(n_max: int, x) -> np.ndarray:
    """``j_n(x)`` for ``n = 0..n_max``.

    Miller's algorithm: the recurrence is run downward from an order well
    above ``n_max`` and ``|x|`` with periodic rescaling, then normalised
    against whichever of the closed forms ``j_0`` and ``j_1`` is larger, so
    zeros of either do not spoil the result.

    Parameters
    ----------
    n_max : int
    x : complex or array_like
        Nonzero argument(s).

    Returns
    -------
    ndarray, shape ``(n_max + 1,) + x.shape``, complex
    """
    x = _as_array(x)
    out = np.zeros((max(n_max, 1) + 1,) + x.shape, dtype=complex)
    start = int(max(n_max, 1) + 20 + 2 * np.max(np.abs(x)) + 10 * np.sqrt(np.max(np.abs(x)) + 1))
    f_next = np.zeros(x.shape, dtype=complex)
    f_cur = np.full(x.shape, 1e-30, dtype=complex)
    for n in range(start, 0, -1):
        if n <= max(n_max, 1):
            out[n] = f_cur
        f_prev = (2 * n + 1) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        big = np.abs(f_cur) > 1e100
        if np.any(big):
            scale = np.where(big, 1e-100, 1.0)
            f_cur = f_cur * scale
            f_next = f_next * scale
            out[n:] *= scale
    out[0] = f_cur
    j0 = np.sin(x) / x
    j1 = np.sin(x) / x**2 - np.cos(x) / x
    use0 = np.abs(j0) >= np.abs(j1)
    with np.errstate(invalid="ignore", divide="ignore"):
        norm = np.where(use0, j0 / out[0], j1 / out[1])
    out *= norm
    return out[: n_max + 1]


def spherical_yn(n_max: int, x) -> np.ndarray:
    """``y_n(x)`` for ``n = 0..n_max`` by forward recurrence."""
    x = _as_array(x)
    out = np.empty((n_max + 1,) + x.shape, dtype=complex)
    out[0] = -np.cos(x) / x
    if n_max >= 1:
        out[1] = -np.cos(x) / x**2 - np.sin(x) / x
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(2, n_max + 1):
            out[n] = (2 * n - 1) / x * out[n - 1] - out[n - 2]
    return out


def spherical_hn(n_max: int, x) -> np.ndarray:
    """Outgoing spherical Hankel function ``h_n^(1) = j_n + i y_n``.

    Orders far above ``|x|`` overflow to non-finite values; the series
    stop long before such orders matter.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return spherical_jn(n_max, x) + 1j * spherical_yn(n_max, x)


def derivative(values: np.ndarray, x) -> np.ndarray:
    """``f_n'(x)`` from ``f_n = j_n, y_n`` or ``h_n`` values for ``n = 0..n_max``.

    Uses ``f_0' = -f_1`` and ``f_n' = f_{n-1} - (n+1)/x f_n``; the highest
    order needs ``f_{n_max+1}``, so callers should request one extra order.
    """
    x = np.asarray(x, dtype=complex)
    d = np.empty_like(values)
    d[0] = -values[1]
    n = np.arange(1, values.shape[0]).reshape((-1,) + (1,) * x.ndim)
    with np.errstate(over="ignore", invalid="ignore"):
        d[1:] = values[:-1] - (n + 1) / x * values[1:]
    return d[:-1]


def riccati_derivative(values: np.ndarray, x) -> np.ndarray:
    """``[x f_n(x)]'`` for ``n = 0..n_max - 1`` (see :func:`derivative`)."""
    x = np.asarray(x, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        return values[:-1] + x * derivative(values, x)
