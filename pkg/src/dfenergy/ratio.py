"""Helpers for exact rational values.

All quantities in this package (periods, start times, powers, energies) are
``fractions.Fraction`` instances, kept exact end to end.  Decimal rendering
only happens here, at the serialization boundary.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import SchemaError


def parse_ratio(text: str) -> Fraction:
    """Parse ``"7/2"``, ``"3.5"`` or ``"23"`` into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational number: {text!r}") from exc


def format_ratio(value: Fraction) -> str:
    """Render exactly: integers bare (``"23"``), otherwise ``"num/den"``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_str(value: Fraction, significant: int = 6) -> str:
    """Approximate decimal rendering with the given significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = significant
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
    text = str(quotient.normalize())
    if "E" in text:
        text = format(quotient.normalize(), "f")
    return text
