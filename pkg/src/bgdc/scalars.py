"""Scalars: exact Gaussian rationals and a floating-point fallback.

Every computation in the package is written against plain arithmetic
operators, so the same code runs on :class:`GaussianRational` (exact mode)
or on builtin ``complex`` (float mode).  A :class:`Field` object carries the
handful of constants and comparisons that depend on the mode.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = [
    "GaussianRational",
    "Scalar",
    "Field",
    "EXACT",
    "FLOAT",
    "field_of",
    "parse_scalar",
    "format_scalar",
]


_new = object.__new__


class GaussianRational:
    """Complex number with rational real and imaginary parts.

    Stored as ``(a + b i) / d`` with integers ``a, b`` and ``d > 0`` in
    lowest terms, which keeps the hot arithmetic on plain ints.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = re if isinstance(re, Fraction) else Fraction(re)
        im = im if isinstance(im, Fraction) else Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        if d != 1:
            g = gcd(a, b, d)
        else:
            g = 1
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is GaussianRational:
            d, f = self._d, other._d
            if d == f:
                a, b = self._a + other._a, self._b + other._b
            else:
                a, b, d = self._a * f + other._a * d, self._b * f + other._b * d, d * f
            if d != 1:
                g = gcd(a, b, d)
                if g != 1:
                    a //= g
                    b //= g
                    d //= g
            obj = _new(GaussianRational)
            obj._a = a
            obj._b = b
            obj._d = d
            return obj
        if isinstance(other, int):
            return GaussianRational._make(self._a + other * self._d, self._b, self._d)
        if isinstance(other, Rational):
            return self + GaussianRational(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is GaussianRational:
            return self + (-other)
        if isinstance(other, Rational):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, e = self._a, self._b, other._a, other._b
            d = self._d * other._d
            if not b:
                a, b = a * c, a * e
            elif not e:
                a, b = a * c, b * c
            else:
                a, b = a * c - b * e, a * e + b * c
            if d != 1:
                g = gcd(a, b, d)
                if g != 1:
                    a //= g
                    b //= g
                    d //= g
            obj = _new(GaussianRational)
            obj._a = a
            obj._b = b
            obj._d = d
            return obj
        if isinstance(other, int):
            return GaussianRational._make(self._a * other, self._b * other, self._d)
        if isinstance(other, Rational):
            return self * GaussianRational(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational) and type(other) is not GaussianRational:
            other = GaussianRational(other)
        if type(other) is not GaussianRational:
            return NotImplemented
        c, e, f = other._a, other._b, other._d
        if not c and not e:
            raise ZeroDivisionError("division by exact zero")
        # (a+bi)/d / ((c+ei)/f) = f (a+bi)(c-ei) / (d (c^2+e^2))
        a, b = self._a, self._b
        norm = c * c + e * e
        re = (a * c + b * e) * f
        im = (b * c - a * e) * f
        den = self._d * norm
        return GaussianRational._make(re, im, den)

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(other) / self
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return GaussianRational(1) / (self ** -exponent)
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = self._a, -self._b, self._d
        return obj

    def __abs__(self) -> float:
        return abs(complex(self))

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, int):
            return not self._b and self._d == 1 and self._a == other
        if isinstance(other, Rational):
            return not self._b and self.re == other
        if isinstance(other, (complex, float)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self._b:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    @property
    def is_real(self) -> bool:
        return not self._b

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return str(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = f"{im}i"
        if not re:
            return ims
        sign = "" if ims.startswith("-") else "+"
        return f"{re}{sign}{ims}"


Scalar = Union[GaussianRational, complex]


class Field:
    """Constants and comparison policy for one scalar backend."""

    def __init__(self, name: str, exact: bool, rtol: float = 0.0, atol: float = 0.0):
        self.name = name
        self.exact = exact
        self.rtol = rtol
        self.atol = atol
        if exact:
            self.zero = GaussianRational(0)
            self.one = GaussianRational(1)
            self.i = GaussianRational(0, 1)
        else:
            self.zero = 0j
            self.one = 1 + 0j
            self.i = 1j

    def __repr__(self):
        return f"Field({self.name!r})"

    def convert(self, x) -> Scalar:
        """Coerce an int, Fraction, string, GaussianRational or complex."""
        if isinstance(x, (str, dict)):
            x = parse_scalar(x)
        if self.exact:
            if type(x) is GaussianRational:
                return x
            if isinstance(x, Rational):
                return GaussianRational(x)
            raise TypeError(f"cannot represent {x!r} exactly")
        return complex(x)

    def frac(self, num: int, den: int = 1) -> Scalar:
        if self.exact:
            return GaussianRational(Fraction(num, den))
        return complex(num / den)

    def is_zero(self, x, scale: float = 1.0) -> bool:
        if self.exact:
            return not x
        return abs(x) <= self.atol + self.rtol * scale

    def close(self, a, b) -> bool:
        if self.exact:
            return a == b
        scale = max(abs(a), abs(b))
        return abs(a - b) <= self.atol + self.rtol * scale


EXACT = Field("exact", exact=True)
FLOAT = Field("float", exact=False, rtol=1e-10, atol=1e-12)


def field_of(x) -> Field:
    """Backend owning a scalar value."""
    if type(x) is GaussianRational or isinstance(x, Rational):
        return EXACT
    return FLOAT


def parse_scalar(value) -> GaussianRational:
    """Parse ``"p/q"``, an int, or ``{"re": "p/q", "im": "p/q"}``."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, dict):
        return GaussianRational(Fraction(str(value.get("re", "0"))), Fraction(str(value.get("im", "0"))))
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    if isinstance(value, str):
        return GaussianRational(Fraction(value.strip()))
    raise TypeError(f"cannot parse scalar from {value!r}")


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    """JSON-ready form: rational string, ``{"re","im"}`` dict, or floats."""
    if type(x) is GaussianRational:
        if not x.im:
            return _fraction_str(x.re)
        return {"re": _fraction_str(x.re), "im": _fraction_str(x.im)}
    if isinstance(x, Rational):
        return _fraction_str(Fraction(x))
    x = complex(x)
    if x.imag == 0:
        return x.real
    return {"re": x.real, "im": x.imag}
