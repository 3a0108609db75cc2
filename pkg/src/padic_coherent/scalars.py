"""Exact scalars: rationals and complex numbers with rational parts.

Real quantities stay as :class:`fractions.Fraction`.  Complex values use
:class:`QComplex`, which interoperates with ``int`` and ``Fraction`` and
exposes ``conjugate()`` like every built-in number, so generic code can
conjugate without caring which kind of scalar it holds.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction, "QComplex"]


class QComplex:
    """Complex number ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QComplex is immutable")

    @staticmethod
    def _coerce(other) -> QComplex | None:
        if isinstance(other, QComplex):
            return other
        if isinstance(other, Rational):
            return QComplex(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("QComplex division by zero")
        n = self * o.conjugate()
        return QComplex(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return QComplex(1) / (self ** (-n))
        result, base = QComplex(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> QComplex:
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"QComplex({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


def abs2(x: Scalar) -> Fraction:
    """Squared modulus, exact."""
    if isinstance(x, QComplex):
        return x.abs2()
    return Fraction(x) * Fraction(x)


def simplify(x: Scalar) -> Scalar:
    """Collapse a QComplex with zero imaginary part to a Fraction."""
    if isinstance(x, QComplex) and x.im == 0:
        return x.re
    return x


def is_real(x: Scalar) -> bool:
    return not isinstance(x, QComplex) or x.im == 0


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer literal.  Floats are rejected."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(s)


def format_rational(x: int | Fraction) -> str:
    """``"num/den"`` string, integers without a denominator."""
    return str(Fraction(x))


def to_json_scalar(x: Scalar):
    """JSON form: a ``"num/den"`` string when real, else ``{"re", "im"}``."""
    x = simplify(x)
    if isinstance(x, QComplex):
        return {"re": format_rational(x.re), "im": format_rational(x.im)}
    return format_rational(x)


def from_json_scalar(obj) -> Scalar:
    if isinstance(obj, dict):
        return simplify(QComplex(parse_rational(obj["re"]), parse_rational(obj["im"])))
    if isinstance(obj, int):
        return Fraction(obj)
    return parse_rational(str(obj))
