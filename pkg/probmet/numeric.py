"""
Exact extended rationals.

Finite values are :class:`fractions.Fraction` instances, infinity is the
:data:`INF` singleton. ``INF`` takes part in the Python operators directly
(``Fraction(1) < INF``, ``INF + Fraction(2) is INF``), so the rest of the
package compares and adds distances with the ordinary operators and never
sees a float.
"""
import re
from enum import IntEnum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .exceptions import NumberFormatError

_RATIONAL = re.compile(r"^(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


class Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("probmet.INF")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        if other is self or isinstance(other, Rational):
            return False
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        if isinstance(other, Rational):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, Rational):
            return True
        return NotImplemented

    def __ge__(self, other):
        if other is self or isinstance(other, Rational):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, Rational):
            return self
        return NotImplemented

    __radd__ = __add__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

ExtReal = Union[Fraction, Infinity]
UnitVal = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def is_finite(value: ExtReal) -> bool:
    return value is not INF


def ext(value: Union[ExtReal, int, str]) -> ExtReal:
    """
    Coerce ints and grammar strings into extended rationals.
    """
    if value is INF or isinstance(value, Fraction):
        result = value
    elif isinstance(value, str):
        return parse_ext(value)
    elif isinstance(value, int) and not isinstance(value, bool):
        result = Fraction(value)
    else:
        raise NumberFormatError(f"{value!r} is not an exact extended rational")
    if result is not INF and result < 0:
        raise NumberFormatError(f"{value!r} is negative")
    return result


def as_unit(value: Union[Fraction, int, str]) -> UnitVal:
    result = ext(value)
    if result is INF or result > 1:
        raise NumberFormatError(f"{value!r} is not in [0, 1]")
    return result


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    if a is INF or b is INF:
        return INF
    return a + b


def ext_cmp(a: ExtReal, b: ExtReal) -> Ordering:
    if a == b:
        return Ordering.EQUAL
    return Ordering.LESS if a < b else Ordering.GREATER


def ext_min(values: Iterable[ExtReal]) -> ExtReal:
    return min(values, default=INF)


def ext_max(values: Iterable[ExtReal]) -> ExtReal:
    return max(values, default=ZERO)


def parse_ext(text: str) -> ExtReal:
    """
    Parse ``"5"``, ``"5/3"`` or ``"inf"``. Nothing else is accepted.
    """
    if not isinstance(text, str):
        raise NumberFormatError(f"expected a string, got {type(text).__name__}")
    if text == "inf":
        return INF
    match = _RATIONAL.match(text)
    if match is None:
        if "." in text or "e" in text.lower():
            raise NumberFormatError(f"{text!r}: rationals only, no decimal forms")
        raise NumberFormatError(f"{text!r} is not of the form p, p/q or inf")
    numerator, denominator = match.groups()
    return Fraction(int(numerator), int(denominator or 1))


def parse_unit(text: str) -> UnitVal:
    value = parse_ext(text)
    if value is INF or value > 1:
        raise NumberFormatError(f"{text!r} is not in [0, 1]")
    return value


def format_ext(value: ExtReal) -> str:
    if value is INF:
        return "inf"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
