"""Rational triangles: Schwarz-Christoffel maps, the curve eta^n = xi^(n-n0) (1-xi)^(n-n1),
the stellated n-gon and its billiards."""

from .signature import (
    CoverProfile,
    SignatureError,
    TriangleSignature,
    cover_profile,
    genus,
    genus_table,
    make_signature,
    parse_signature,
)

__all__ = [
    "CoverProfile",
    "SignatureError",
    "TriangleSignature",
    "cover_profile",
    "genus",
    "genus_table",
    "make_signature",
    "parse_signature",
]

__version__ = "0.1.0"
