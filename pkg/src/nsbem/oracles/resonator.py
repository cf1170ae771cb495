"""Lumped-element resonance of a Helmholtz resonator."""

from __future__ import annotations

import math


def resonator_ka(a: float, area: float, volume: float, neck_length: float) -> float:
    """Lumped resonance ``ka = a sqrt(A / (V L))``.

    Parameters
    ----------
    a : float
        Reference length used to form ``ka``.
    area : float
        Opening area ``A`` (zero gives zero).
    volume : float
        Cavity volume ``V``.
    neck_length : float
        Neck length ``L``.

    Examples
    --------
    >>> round(resonator_ka(1.0, math.pi * 0.162**2, 4 / 3 * math.pi * 0.92**3, 0.67), 5)
    0.19423
    """
    if a <= 0 or volume <= 0 or neck_length <= 0 or area < 0:
        raise ValueError("a, volume and neck_length must be positive and area nonnegative")
    return a * math.sqrt(area / (volume * neck_length))
