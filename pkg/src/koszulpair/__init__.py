"""Exact computations with pre-Koszul pairs of graded algebras and corings."""
from .exceptions import (ComplexError, ConsistencyError, DescentError, DimensionMismatchError,
                         FieldMismatchError, InputError, KoszulError, PreKoszulError,
                         TwistingError)
from .linalg import Field, Matrix, Subspace
from .graded import (GradedAlgebra, GradedCoring, PreKoszulPair, QuadraticPresentation,
                     build_algebra, build_coring, build_pair, check_prekoszul)
from .complexes import FiniteComplex, homology_dims
from .koszul import ComplexFlavor, KoszulVerdict, build_slice, koszul_verdict
from .bar import bar_complex, cobar_complex, ext_table, phi_chain_map, psi_chain_map, tor_table
from .twisting import (EntwiningMap, TwistingMap, TwistingMatrixFamily, derive_tau_lambda,
                       extend_sigma, twisted_pair, verify_factorization)

__version__ = "0.1.0"

__all__ = [
    "ComplexError", "ConsistencyError", "DescentError", "DimensionMismatchError",
    "FieldMismatchError", "InputError", "KoszulError", "PreKoszulError", "TwistingError",
    "Field", "Matrix", "Subspace",
    "GradedAlgebra", "GradedCoring", "PreKoszulPair", "QuadraticPresentation",
    "build_algebra", "build_coring", "build_pair", "check_prekoszul",
    "FiniteComplex", "homology_dims",
    "ComplexFlavor", "KoszulVerdict", "build_slice", "koszul_verdict",
    "bar_complex", "cobar_complex", "ext_table", "phi_chain_map", "psi_chain_map", "tor_table",
    "EntwiningMap", "TwistingMap", "TwistingMatrixFamily", "derive_tau_lambda",
    "extend_sigma", "twisted_pair", "verify_factorization",
]
