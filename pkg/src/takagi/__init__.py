"""Unimodular rational Pick interpolation on the disk and bidisk."""

from .linalg import Inertia, hermitian_inertia
from .pick import DiskProblem, gram_decompose, pick_matrix
from .polynomials import BlaschkeProduct, MoebiusMap, Poly, moebius_swap
from .krein import PartialJIsometry, SignatureMatrix, extend_j_isometry, j_gram
from .realization import Realization, eval_realization, kernel_gamma, realization_to_rational
from .disk import DiskProblem as _DiskProblem  # noqa: F401  (re-exported via pick)
from .disk import RationalInterpolant, TakagiSolution, combine, solve, solve_all_shifts, solve_centered
from .bidisk import (
    AglerPair,
    BidiskProblem,
    BidiskRealization,
    BidiskSolution,
    BiRational,
    Poly2,
    build_bidisk_realization,
    eval_bidisk,
    gamma_forms,
    one_variable_pair,
    regularize_pair,
    restrict_balanced,
    solve_bidisk,
    to_birational,
    toral_check,
    validate_pair,
)

__all__ = [
    "AglerPair",
    "BidiskProblem",
    "BidiskRealization",
    "BidiskSolution",
    "BiRational",
    "Poly2",
    "build_bidisk_realization",
    "eval_bidisk",
    "gamma_forms",
    "one_variable_pair",
    "regularize_pair",
    "restrict_balanced",
    "solve_bidisk",
    "to_birational",
    "toral_check",
    "validate_pair",
    "Inertia",
    "hermitian_inertia",
    "DiskProblem",
    "pick_matrix",
    "gram_decompose",
    "Poly",
    "MoebiusMap",
    "moebius_swap",
    "BlaschkeProduct",
    "SignatureMatrix",
    "PartialJIsometry",
    "j_gram",
    "extend_j_isometry",
    "Realization",
    "eval_realization",
    "realization_to_rational",
    "kernel_gamma",
    "RationalInterpolant",
    "TakagiSolution",
    "solve",
    "solve_centered",
    "solve_all_shifts",
    "combine",
]
