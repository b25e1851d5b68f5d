"""Exact scalars in Q(i).

A :class:`GaussianRational` is ``re + im*i`` with both parts held as
:class:`fractions.Fraction`, so they are always in lowest terms with a positive
denominator.  The text form is the one used in configuration files::

    RAT | RAT "i" | RAT ("+"|"-") RAT "i"        RAT = [sign] digits ["/" digits]

A bare ``i`` (optionally signed, or after ``+``/``-``) is also accepted as a
shorthand for a unit imaginary part; formatting always writes the coefficient.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from birmap.errors import DomainError, ParseError

__all__ = ["GaussianRational", "parse_scalar", "format_scalar", "gaussian_sqrt", "I"]


class GaussianRational:
    """Immutable exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational real part with an imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", _to_fraction(re))
        object.__setattr__(self, "im", _to_fraction(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # -- predicates ---------------------------------------------------------
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, _ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.im:
            return GaussianRational._raw(1 / self.re, _ZERO)
        n = self.norm()
        return GaussianRational._raw(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


_ZERO = Fraction(0)


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


def _coerce(v):
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, Fraction):
        return GaussianRational._raw(v, _ZERO)
    if isinstance(v, int):
        return GaussianRational._raw(Fraction(v), _ZERO)
    if isinstance(v, Rational):
        return GaussianRational._raw(Fraction(v), _ZERO)
    return None


def as_gaussian(v) -> GaussianRational:
    """Coerce ints, Fractions, and scalar strings to :class:`GaussianRational`."""
    if isinstance(v, str):
        return parse_scalar(v)
    g = _coerce(v)
    if g is None:
        raise TypeError(f"cannot convert {type(v).__name__} to GaussianRational")
    return g


ZERO = GaussianRational._raw(Fraction(0), _ZERO)
ONE = GaussianRational._raw(Fraction(1), _ZERO)
I = GaussianRational._raw(_ZERO, Fraction(1))


# -- text form --------------------------------------------------------------

def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(z: GaussianRational) -> str:
    """Render ``z`` in the scalar grammar; ``parse_scalar`` inverts it."""
    z = as_gaussian(z)
    if not z.im:
        return _format_rational(z.re)
    if not z.re:
        return _format_rational(z.im) + "i"
    sign = "+" if z.im > 0 else "-"
    return f"{_format_rational(z.re)}{sign}{_format_rational(abs(z.im))}i"


_TOKEN = re.compile(r"\s*(?:(\d+)|([+\-/i])|(\S))")


def parse_scalar(text: str) -> GaussianRational:
    """Parse the scalar grammar exactly.

    >>> parse_scalar("1+2i")
    GaussianRational('1+2i')
    >>> parse_scalar("-3/7")
    GaussianRational('-3/7')
    """
    if not isinstance(text, str):
        raise ParseError(f"scalar must be a string, got {type(text).__name__}")
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(3) is not None:
            raise ParseError(f"malformed scalar {text!r}: unexpected token {m.group(3)!r}")
        tokens.append(m.group(1) or m.group(2))
    if not tokens:
        raise ParseError("empty scalar")
    parser = _ScalarParser(text, tokens)
    return parser.parse()


class _ScalarParser:
    def __init__(self, text, tokens):
        self.text = text
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, tok, what):
        shown = "end of input" if tok is None else repr(tok)
        raise ParseError(f"malformed scalar {self.text!r}: expected {what}, got {shown}")

    def unsigned_rational(self, allow_bare_i):
        tok = self.peek()
        if tok == "i" and allow_bare_i:
            return None
        if tok is None or not tok.isdigit():
            self.fail(tok, "digits")
        self.take()
        num = int(tok)
        if self.peek() == "/":
            self.take()
            den_tok = self.take()
            if den_tok is None or not den_tok.isdigit():
                self.fail(den_tok, "denominator digits")
            den = int(den_tok)
            if den == 0:
                raise ParseError(f"zero denominator in scalar {self.text!r}: token {den_tok!r}")
            return Fraction(num, den)
        return Fraction(num)

    def signed_rational(self, allow_bare_i):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        value = self.unsigned_rational(allow_bare_i)
        if value is None:
            return sign * Fraction(1), True
        return sign * value, False

    def parse(self):
        first, bare = self.signed_rational(allow_bare_i=True)
        if self.peek() == "i":
            self.take()
            self.expect_end()
            return GaussianRational._raw(_ZERO, first)
        if bare:
            self.fail(self.peek(), "'i'")
        if self.peek() is None:
            return GaussianRational._raw(first, _ZERO)
        op = self.take()
        if op not in ("+", "-"):
            self.fail(op, "'+' or '-'")
        second, _ = self.signed_rational(allow_bare_i=True)
        if self.peek() != "i":
            self.fail(self.peek(), "'i'")
        self.take()
        self.expect_end()
        if op == "-":
            second = -second
        return GaussianRational._raw(first, second)

    def expect_end(self):
        if self.peek() is not None:
            self.fail(self.peek(), "end of input")


def gaussian_sqrt(z) -> GaussianRational | None:
    """Exact square root in Q(i), or ``None`` when none exists.

    Among the two roots the one with positive real part (or, for purely
    imaginary roots, positive imaginary part) is returned.
    """
    z = as_gaussian(z)
    if not z:
        return ZERO
    a, b = z.re, z.im
    r = _rational_sqrt(a * a + b * b)
    if r is None:
        return None
    x = _rational_sqrt((a + r) / 2)
    y = _rational_sqrt((r - a) / 2)
    if x is None or y is None:
        return None
    # x, y >= 0 solve x^2 - y^2 = a; the sign of 2xy must match b
    root = GaussianRational._raw(x, -y if b < 0 else y)
    if root * root != z:
        raise DomainError(f"internal error computing sqrt of {z}")
    if root.re < 0 or (root.re == 0 and root.im < 0):
        root = -root
    return root


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    from math import isqrt

    n, d = q.numerator, q.denominator
    sn, sd = isqrt(n), isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None
