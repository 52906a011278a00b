"""Exact scalars, sparse (Laurent) polynomials and exact linear algebra."""

from .fields import GF, QQ, Field, FieldMismatch, PrimeField, Rationals, field_from_name
from .parse import ParseError, parse_poly
from .poly import (
    DEGREVLEX,
    LEX,
    ZERO_DEGREE,
    MultiPoly,
    PolyRing,
    RingMismatch,
    TermOrder,
    elimination_order,
    exact_divide,
)

__all__ = [
    "GF",
    "QQ",
    "Field",
    "FieldMismatch",
    "PrimeField",
    "Rationals",
    "field_from_name",
    "ParseError",
    "parse_poly",
    "DEGREVLEX",
    "LEX",
    "ZERO_DEGREE",
    "MultiPoly",
    "PolyRing",
    "RingMismatch",
    "TermOrder",
    "elimination_order",
    "exact_divide",
]
