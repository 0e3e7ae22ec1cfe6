"""Exact arithmetic in the Gaussian rationals Q(i).

Rational parts are :class:`fractions.Fraction`, which already keeps
numerator/denominator reduced with a positive denominator over Python's
arbitrary precision integers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

from .errors import DivisionByZero

__all__ = ["GaussRational", "Scalar", "ZERO", "ONE", "I", "gr", "parse_scalar"]

Scalar = Union["GaussRational", int, Fraction]

_RATIONAL = r"\d+(?:/\d+)?"
_PURE_IMAG = re.compile(rf"^([+-]?)({_RATIONAL})?i$")
_FULL = re.compile(rf"^([+-]?{_RATIONAL})(?:([+-])({_RATIONAL})?i)?$")


class GaussRational:
    """Immutable element ``re + im*i`` with ``re, im`` in Q."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussRational":
        if isinstance(value, GaussRational):
            return value
        if isinstance(value, (int, _RationalABC)):
            return cls(Fraction(value))
        if isinstance(value, str):
            return parse_scalar(value)
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact; build from Fractions")
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussRational")

    # field operations -------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __pos__(self) -> "GaussRational":
        return self

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, _RationalABC)):
            return GaussRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inv(self) -> "GaussRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise DivisionByZero("inverse of 0 in Q(i)")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int) -> "GaussRational":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inv()
        result = ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    # comparison / hashing ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    # text ---------------------------------------------------------------
    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}i"
        if self.re == 0:
            return ("-" if self.im < 0 else "") + imag
        return f"{self.re}{'-' if self.im < 0 else '+'}{imag}"

    def __repr__(self) -> str:
        return f"GaussRational('{self}')"


def parse_scalar(text: str) -> GaussRational:
    """Parse the ``"p/q+r/si"`` wire format (``"1/2-3/4i"``, ``"-i"``, ``"7"``)."""
    s = text.replace(" ", "")
    m = _PURE_IMAG.match(s)
    if m:
        sign, mag = m.groups()
        im = Fraction(mag) if mag else Fraction(1)
        return GaussRational(0, -im if sign == "-" else im)
    m = _FULL.match(s)
    if not m:
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part, sign, mag = m.groups()
    if sign is None:
        return GaussRational(Fraction(re_part))
    im = Fraction(mag) if mag else Fraction(1)
    return GaussRational(Fraction(re_part), -im if sign == "-" else im)


def gr(value) -> GaussRational:
    """Shorthand coercion used throughout the package."""
    return GaussRational.coerce(value)


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)
