"""Quadratic surface meshes, node frames and triangle quadrature."""

from .frames import NodeFrame, NodeFrames, node_element_incidence, node_frames
from .generators import generate_plate_mesh, generate_sphere_mesh, sphere_points
from .mesh import QuadMesh, load_mesh, save_mesh, save_msh2, shape_eval
from .proximity import SurfaceLocator, SurfaceProximity, surface_proximity
from .quadrature import TriangleQuadrature, gauss_rule
from .revolution import (
    DishParams,
    Profile,
    ResonatorParams,
    cavity_probes,
    cavity_volume,
    generate_dish_mesh,
    generate_resonator_mesh,
    generate_transducer_mesh,
    merge_meshes,
    resonator_profile,
    revolve,
)

__all__ = [
    "DishParams",
    "NodeFrame",
    "NodeFrames",
    "Profile",
    "QuadMesh",
    "ResonatorParams",
    "SurfaceLocator",
    "SurfaceProximity",
    "TriangleQuadrature",
    "cavity_probes",
    "cavity_volume",
    "gauss_rule",
    "generate_dish_mesh",
    "generate_plate_mesh",
    "generate_resonator_mesh",
    "generate_transducer_mesh",
    "generate_sphere_mesh",
    "load_mesh",
    "merge_meshes",
    "node_element_incidence",
    "node_frames",
    "resonator_profile",
    "revolve",
    "save_mesh",
    "save_msh2",
    "shape_eval",
    "sphere_points",
    "surface_proximity",
]
