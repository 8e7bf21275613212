"""Exact number handling: rationals everywhere, with a distinguished infinity.

All bound computations use `fractions.Fraction`; the only non-rational value
that ever appears is the unbounded tuple multiplicity, represented by
``math.inf``.  Comparisons between Fraction and ``math.inf`` are exact in
Python, but arithmetic with infinity is never performed: every code path
branches on `is_infinite` first.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf

Rat = Fraction  # alias used in signatures


def is_infinite(x) -> bool:
    return x == INF


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and exact strings ("7", "3/4") to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if x != int(x):
            raise ValueError(f"refusing inexact float {x!r}; pass int, Fraction or 'p/q' string")
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_multiplicity(x):
    """Parse a max tuple multiplicity: 'inf'/INF or an exact rational >= 1."""
    if x == INF or (isinstance(x, str) and x.strip().lower() in ("inf", "infinity")):
        return INF
    b = as_rational(x)
    if b < 1:
        raise ValueError(f"max tuple multiplicity must be >= 1 or infinite, got {b}")
    return b


def format_exact(x) -> str:
    """Render a value for serialization: '7', '3/4' or 'inf'."""
    if is_infinite(x):
        return "inf"
    f = as_rational(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_decimal(x, places: int = 6) -> str:
    """Human-oriented decimal rendering; exact when the value is an integer."""
    if is_infinite(x):
        return "inf"
    f = as_rational(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{float(f):.{places}g}"
