"""Public algebra surface: exact fields, polynomials, Laurent units.

Thin facade over the fields / poly / linalg implementation modules so the
coefficient arithmetic used by the rest of the library lives behind one
import.
"""

from .fields import (
    FieldElem,
    FieldError,
    FieldSpec,
    field_make,
    minimal_extension_with_root,
    root_of_unity,
)
from .poly import (
    LaurentPoly,
    Poly,
    laurent_normalize,
    poly_divmod,
    poly_gcd,
    poly_xgcd,
    root_multiplicity,
)

__all__ = [
    "FieldElem",
    "FieldError",
    "FieldSpec",
    "field_make",
    "minimal_extension_with_root",
    "root_of_unity",
    "LaurentPoly",
    "Poly",
    "laurent_normalize",
    "poly_divmod",
    "poly_gcd",
    "poly_xgcd",
    "root_multiplicity",
]
