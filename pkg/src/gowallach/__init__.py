"""Geodesic vectors and the geodesic-orbit property on generalized Wallach
spaces, computed in exact rational arithmetic."""

__version__ = "0.1.0"

from .catalog import CATALOG_NAMES, catalog, load_space, parse_space_ref
from .classify import GOClassification, ProbePlan, classify_space, is_go_metric
from .decomposition import SpaceDescriptor, project, triple_symbols, verify_space
from .errors import GWError
from .geodesic import (
    InvariantMetric,
    check_prop13,
    completion_exists,
    geodesic_equations,
    inner_product,
    is_geodesic_vector,
    solve_completion,
)
from .lie import AlgebraVector, LieAlgebraData, bracket, build_so_basis, build_su2_basis, killing_gram
from .sampler import sample_geodesic_vectors
from .solve_small import SolutionFamily, enumerate_stiefel4, enumerate_su2
from .verify import FlowResult, euler_arnold_flow

__all__ = [
    "AlgebraVector", "CATALOG_NAMES", "FlowResult", "GOClassification", "GWError",
    "InvariantMetric", "LieAlgebraData", "ProbePlan", "SolutionFamily", "SpaceDescriptor",
    "bracket", "build_so_basis", "build_su2_basis", "catalog", "check_prop13",
    "classify_space", "completion_exists", "enumerate_stiefel4", "enumerate_su2",
    "euler_arnold_flow", "geodesic_equations", "inner_product", "is_geodesic_vector",
    "is_go_metric", "killing_gram", "load_space", "parse_space_ref", "project",
    "sample_geodesic_vectors", "solve_completion", "triple_symbols", "verify_space",
]
