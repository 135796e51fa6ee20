"""Exact arithmetic substrate."""

from .cyclotomic import CyclotomicSplit, cyclotomic_poly, cyclotomic_split, euler_phi
from .factor import (count_roots, factor_over_finite_field, factor_over_Q,
                     squarefree_decomposition)
from .fields import (QQ, Field, FiniteField, PrimeField, QuadraticField, QuotientField,
                     RationalField, factorint, is_prime, sqrt_mod_p)
from .linalg import det, inverse, rank
from .mpoly import MPoly
from .quadratic import (INFINITY, IsotropyResult, QForm, SquareClass, hilbert_symbol,
                        is_isotropic_over_Q, is_local_square, square_class)
from .upoly import INF, FunctionField, RatFunc, UPoly, upoly_from_text

__all__ = [
    "QQ", "Field", "FiniteField", "PrimeField", "QuadraticField", "QuotientField",
    "RationalField", "FunctionField", "RatFunc", "UPoly", "MPoly", "INF", "INFINITY",
    "QForm", "SquareClass", "IsotropyResult", "CyclotomicSplit",
    "square_class", "hilbert_symbol", "is_isotropic_over_Q", "is_local_square",
    "cyclotomic_poly", "cyclotomic_split", "euler_phi", "factorint", "is_prime",
    "sqrt_mod_p", "det", "inverse", "rank", "factor_over_Q", "factor_over_finite_field",
    "count_roots", "squarefree_decomposition", "upoly_from_text",
]
