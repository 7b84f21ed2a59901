"""Helpers for exact rational values at package boundaries.

All arithmetic in this package is done with `fractions.Fraction`; floats are
rejected on input so that every comparison stays exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GameFileError

Rational = Fraction


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction, or "p/q" string to a Fraction.

    Floats are refused: they would silently break exactness guarantees.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise GameFileError(f"bad rational literal {value!r}") from exc
    raise TypeError(f"expected int, Fraction, or 'p/q' string, got {type(value).__name__}")


def format_rational(value: Fraction):
    """Render a Fraction as a JSON-friendly value: int when integral, else "p/q"."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"
