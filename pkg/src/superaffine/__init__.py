"""Exact computations for the super affine-Virasoro algebra and its tensor modules."""
from .algebra import (
    CEN,
    D,
    EV,
    G,
    H,
    OD,
    Q,
    AlgebraVariant,
    BasisVector,
    Family,
    IllegalFamily,
    VariantTag,
    bracket,
    elem,
    make_variant,
    verify_jacobi,
    verify_super_antisymmetry,
)
from .exact import EchelonBasis, RationalMatrix, SparseVec, nullspace_basis, quotient_dimension, rref
from .gspec import GSpec, builtin_gspec, load_gspec

__version__ = "0.1.0"
