"""Virial-theorem ansatz eigenfunctions for strictly convex 1-D potentials."""
from .errors import (
    AccuracyError,
    ConvexityError,
    DomainError,
    InvalidArgumentError,
    NotFoundError,
    NumericalBreakdownError,
    VirialAnsatzError,
)
from .orthopoly import OrthoBasis, build_basis, gram_matrix, gram_schmidt_basis, virial_condition_residual
from .potential import ConvexityReport, Potential, check_strict_convexity
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .reference_solver import ReferenceSolution, ReferenceSolver, solve
from .spectrum import (
    SpectrumReport,
    ansatz_eval,
    ansatz_states,
    basis_for,
    build_report,
    curve_table,
    energy_hamiltonian,
    energy_virial,
    l2_discrepancy,
)
from .virial_core import GFunction, VirialWeight, build_g, build_weight, virial_weight

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "ConvexityError", "DomainError", "InvalidArgumentError", "NotFoundError",
    "NumericalBreakdownError", "VirialAnsatzError",
    "OrthoBasis", "build_basis", "gram_matrix", "gram_schmidt_basis", "virial_condition_residual",
    "ConvexityReport", "Potential", "check_strict_convexity",
    "DEFAULT_SPEC", "QuadratureSpec",
    "ReferenceSolution", "ReferenceSolver", "solve",
    "SpectrumReport", "ansatz_eval", "ansatz_states", "basis_for", "build_report", "curve_table",
    "energy_hamiltonian", "energy_virial", "l2_discrepancy",
    "GFunction", "VirialWeight", "build_g", "build_weight", "virial_weight",
]
