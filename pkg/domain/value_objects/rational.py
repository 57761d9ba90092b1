"""Exact rational coercion shared by the finite value objects."""
from fractions import Fraction
from numbers import Rational
from typing import Union

from domain.exceptions import ValidationError

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike, field: str) -> Fraction:
    """
    Convert an int, Fraction or exact decimal/fraction string to Fraction.

    Floats are rejected: the finite engine never accepts inexact input.
    """
    if isinstance(value, (bool, float)):
        raise ValidationError(
            field, f"expected an exact rational, got {type(value).__name__} {value!r}"
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(
                field, f"cannot parse {value!r} as an exact fraction"
            ) from None
    raise ValidationError(field, f"expected an exact rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    """'7/6', '-1/3', '2': the string form accepted back by to_fraction."""
    return str(value)
