# data/models/fields.py
from fractions import Fraction
from typing import Annotated, Any, Optional, Union

from pydantic import BeforeValidator, PlainSerializer


def parse_rational(value: Any) -> Fraction:
    """Accept ints, Fractions, decimal strings and "p/q" strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("a boolean is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e
    raise ValueError(f"not a rational number: {value!r}")


def format_rational(value: Optional[Union[Fraction, int, float]]) -> str:
    """Integers bare, exact rationals as p/q, floats with 6 decimals."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
