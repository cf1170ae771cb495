"""Analytical reference solutions, independent of the solver code."""

from .bessel import spherical_hn, spherical_jn, spherical_yn
from .resonator import resonator_ka
from .series import (
    SeriesConfig,
    mie_dielectric,
    mie_pec,
    rigid_sphere_scatter,
    rigid_sphere_surface_static,
)
from .statics import (
    conducting_sphere_field,
    conducting_sphere_surface_normal,
    dielectric_sphere_field,
)

__all__ = [
    "SeriesConfig",
    "conducting_sphere_field",
    "conducting_sphere_surface_normal",
    "dielectric_sphere_field",
    "mie_dielectric",
    "mie_pec",
    "resonator_ka",
    "rigid_sphere_scatter",
    "rigid_sphere_surface_static",
    "spherical_hn",
    "spherical_jn",
    "spherical_yn",
]
