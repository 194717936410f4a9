"""Koszul homology and codepth-3 Tor-algebra classification over prime fields."""

from .exactlin import PrimeField
from .polyring import MonomialOrder, Polynomial, PolynomialRing
from .quotient import GateResult, QuotientRing, buchberger
from .koszul import HomologyBasis, KoszulComplex
from .toralg import ClassificationReport, analyze, classify, full_report, invariants_pqr

__all__ = [
    "PrimeField",
    "MonomialOrder",
    "Polynomial",
    "PolynomialRing",
    "GateResult",
    "QuotientRing",
    "buchberger",
    "HomologyBasis",
    "KoszulComplex",
    "ClassificationReport",
    "analyze",
    "classify",
    "full_report",
    "invariants_pqr",
]
