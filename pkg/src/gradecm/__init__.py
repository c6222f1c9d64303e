"""gradecm: exact grade/height computations and Cohen-Macaulay sense checks
over finitely presented algebras."""

from .scalars import GF, QQ
from .polyring import DegRevLex, Elimination, Lex, Poly, PolyRing, parse_poly

__all__ = [
    "GF", "QQ",
    "PolyRing", "Poly", "parse_poly", "Lex", "DegRevLex", "Elimination",
]

__version__ = "0.1.0"
