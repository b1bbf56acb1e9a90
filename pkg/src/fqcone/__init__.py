"""Verification and search toolkit for the sharp quartic extension
inequality on the punctured cone in F_q^4."""

__version__ = "0.1.0"

from .cone import ConeCtx, ConeModel, build_cone, get_cone
from .gf import FieldCtx, build_field, get_field
from .xform import (ConeFunction, RepCountTable, SharpConstants,
                    character_function, constant_function, norms,
                    pair_convolution, quartic_lhs, ratio, ratio_exact,
                    sharp_constants, symmetrize)

__all__ = [
    "ConeCtx", "ConeFunction", "ConeModel", "FieldCtx", "RepCountTable",
    "SharpConstants", "build_cone", "build_field", "character_function",
    "constant_function", "get_cone", "get_field", "norms",
    "pair_convolution", "quartic_lhs", "ratio", "ratio_exact",
    "sharp_constants", "symmetrize", "__version__",
]
