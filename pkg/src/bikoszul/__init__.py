"""Koszul resultant matrices, exact determinants and eigenvalue solving
for square 2-bilinear polynomial systems on P^nx x P^ny x P^nz."""

__version__ = "0.1.0"

from .core import (
    BilinearSystem,
    CoordinateChange,
    DomainError,
    MHPoly,
    ProjectiveSolution,
    SystemType,
    apply_coordinate_change,
    bezout_coefficient,
    evaluate,
    mhb,
    monomial_basis,
    partial_evaluate_xy,
    planted_root_system,
    random_system,
    system_from_obj,
    system_to_obj,
)
from .exactlinalg import ExactMatrix, SingularMatrixError, det, schur_complement, solve
from .koszul import (
    KoszulBasisElement,
    SymbolicResultantMatrix,
    ThetaPartition,
    assemble_delta1,
    k0_basis,
    k1_basis,
    specialize,
    theta_partition,
)
from .oracle import build_rho, dual_veronese, ff_solve, koszul_strand_map, verify_rho_composition
from .solver import SolveReport, eigen_schur, solve_2bilinear
from .weyman import (
    dual_vector,
    four_degree_vectors,
    is_determinantal,
    mu,
    search_degree_vectors,
    term_table,
)

__all__ = [name for name in dir() if not name.startswith("_")]
