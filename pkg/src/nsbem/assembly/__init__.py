"""Collocation matrices, tangential operators and dense solves."""

from .matrices import (
    BM_VARIANTS,
    BemMatrices,
    assemble,
    assemble_burton_miller,
    default_beta,
    dump_matrix,
    load_matrix,
)
from .quadrature_data import MeshQuadrature, QuadratureConfig
from .solve import DenseSolution, condition_estimate, solve_dense
from .tangential import TangentialOps, tangential_ops

__all__ = [
    "BM_VARIANTS",
    "BemMatrices",
    "DenseSolution",
    "MeshQuadrature",
    "QuadratureConfig",
    "TangentialOps",
    "assemble",
    "assemble_burton_miller",
    "condition_estimate",
    "default_beta",
    "dump_matrix",
    "load_matrix",
    "solve_dense",
    "tangential_ops",
]
