"""Exact scalar helpers.

All scalars in the package are :class:`fractions.Fraction`. Floats are
rejected on input so that nothing inexact can leak into a computation.
"""
import math
from fractions import Fraction

__all__ = ["Fraction", "as_rational", "format_rational", "power", "power_exponent"]


def as_rational(value):
    """Coerce ``value`` to a Fraction.

    Accepts Fraction, int and strings such as ``"3/4"`` or ``"-2"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string like '3/4'")
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(value):
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def power(base, k):
    return Fraction(base) ** k


def power_exponent(value, base):
    """Return the integer k with ``base**k == value``, or None.

    ``base`` must exceed 1. Non-positive values have no exponent.
    """
    value = as_rational(value)
    base = as_rational(base)
    if base <= 1:
        raise ValueError("base must exceed 1")
    if value <= 0:
        return None
    guess = round(math.log(value) / math.log(base))
    for k in (guess, guess - 1, guess + 1):
        if base ** k == value:
            return k
    return None
