"""Annihilators of linearly recurrent sequences over F_p[x]/(x^d)."""

from .bivariate import (
    BiPoly,
    LexGB,
    Staircase,
    minimal_gb_extract,
    normal_form,
    pade_check,
    phi,
    random_lazard_basis,
    sequence_from_gb,
    staircase_of,
    staircase_oracle,
)
from .hankel import (
    BlockHankel,
    CompressionConfig,
    build_hankel,
    hankel_kernel_annihilator,
    hankel_pm_annihilator,
    hankel_pm_basis,
    structured_right_multiply,
)
from .kurakin import kurakin_annihilator, submodule_membership_and_solve
from .lazy import lazy_kurakin_annihilator
from .polymat import ApproximantBasis, PolyMatrix, pm_basis, popov_normalize
from .ring import DEFAULT_PRIME, ContractError, NotAUnitError, ParameterError, PrimeField, TruncPoly
from .sequences import AnnPoly, PartialSequence, apply_poly, cancels
from .sparse import SparseMatrixA, dense_det_oracle, determinant, krylov_sequence, minimal_ideal_of_matrix

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

__all__ = [
    "AnnPoly",
    "apply_poly",
    "ApproximantBasis",
    "BiPoly",
    "BlockHankel",
    "build_hankel",
    "cancels",
    "CompressionConfig",
    "ContractError",
    "DEFAULT_PRIME",
    "dense_det_oracle",
    "determinant",
    "hankel_kernel_annihilator",
    "hankel_pm_annihilator",
    "hankel_pm_basis",
    "krylov_sequence",
    "kurakin_annihilator",
    "lazy_kurakin_annihilator",
    "LexGB",
    "minimal_gb_extract",
    "minimal_ideal_of_matrix",
    "normal_form",
    "NotAUnitError",
    "pade_check",
    "ParameterError",
    "PartialSequence",
    "phi",
    "pm_basis",
    "PolyMatrix",
    "popov_normalize",
    "PrimeField",
    "random_lazard_basis",
    "sequence_from_gb",
    "SparseMatrixA",
    "Staircase",
    "staircase_of",
    "staircase_oracle",
    "structured_right_multiply",
    "submodule_membership_and_solve",
    "TruncPoly",
]
