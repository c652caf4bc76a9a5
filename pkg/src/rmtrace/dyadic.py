"""Exact dyadic rationals ``z / 2**e``.

Every quantity computed at deletion probability 1/2 lives in this ring, so
comparisons against tabulated values can be made with no tolerance.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import InvalidFormat

_TEXT = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def _normalize(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    if exp < 0:
        return num << -exp, 0
    # strip common factors of two
    tz = (num & -num).bit_length() - 1
    shift = min(tz, exp)
    return num >> shift, exp - shift


class DyadicRational:
    """A number ``numerator / 2**exponent`` kept in normal form.

    Normal form: the numerator is odd, or it is zero and the exponent is 0.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        self.numerator, self.exponent = _normalize(int(numerator), int(exponent))

    @classmethod
    def coerce(cls, value) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, Rational):
            den = int(value.denominator)
            if den & (den - 1):
                raise InvalidFormat(f"{value} is not dyadic")
            return cls(int(value.numerator), den.bit_length() - 1)
        if isinstance(value, float):
            return cls.coerce(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to DyadicRational")

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    # arithmetic

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __add__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, InvalidFormat):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, InvalidFormat):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a - b, e)

    def __rsub__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, InvalidFormat):
            return NotImplemented
        return other - self

    def __mul__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, InvalidFormat):
            return NotImplemented
        return DyadicRational(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return DyadicRational(abs(self.numerator), self.exponent)

    def scale2(self, k: int) -> "DyadicRational":
        """Multiply by ``2**k`` (``k`` may be negative)."""
        return DyadicRational(self.numerator, self.exponent - k)

    # comparison

    def __eq__(self, other):
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Rational)):
            return Fraction(self.numerator, self.denominator) == other
        if isinstance(other, float):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def _cmp(self, other) -> int:
        if isinstance(other, DyadicRational):
            a, b, _ = self._aligned(other)
            return (a > b) - (a < b)
        f = self.to_fraction()
        if isinstance(other, (int, Rational, float)):
            return (f > other) - (f < other)
        raise TypeError

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __bool__(self):
        return self.numerator != 0

    # conversion

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.to_float()[0]

    def to_float(self) -> tuple[float, float]:
        """Nearest double and a certified bound on the rounding error.

        The bound is 0 when the value is represented exactly, otherwise half
        an ulp of the result (true division of Python ints rounds correctly).
        Near the subnormal range, where half an ulp is not representable, a
        full ulp is reported.
        """
        f = self.numerator / self.denominator
        if Fraction(f) == self.to_fraction():
            return f, 0.0
        ulp = math.ulp(f)
        return f, ulp / 2 if abs(f) >= 2.0**-1020 else ulp

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.exponent})"


def parse(text: str) -> DyadicRational:
    """Parse ``[-]digits`` or ``[-]digits/digits`` with a power-of-two denominator.

    >>> parse("769/64")
    DyadicRational(769, 6)
    """
    m = _TEXT.match(text)
    if m is None:
        raise InvalidFormat(f"not a dyadic rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0 or den & (den - 1):
        raise InvalidFormat(f"denominator {den} is not a power of two")
    return DyadicRational(num, den.bit_length() - 1)


def render(a: DyadicRational) -> str:
    """Canonical text: ``num/den`` in decimal, or a bare integer."""
    if a.exponent == 0:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


ZERO = DyadicRational(0)
ONE = DyadicRational(1)
HALF = DyadicRational(1, 1)
