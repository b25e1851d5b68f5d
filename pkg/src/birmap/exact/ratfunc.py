"""Reduced rational functions over Q(i)."""

from __future__ import annotations

import re
from typing import Sequence

from birmap.errors import DomainError
from birmap.exact.gaussian import ONE, GaussianRational, as_gaussian
from birmap.exact.gcd import poly_gcd
from birmap.exact.poly import MultiPoly

_ATOM_NUM = re.compile(r"-?[A-Za-z0-9_^*]+")
_ATOM_DEN = re.compile(r"[A-Za-z0-9_^]+")


def _wrapped(text: str) -> bool:
    """True when ``text`` is one parenthesized group, e.g. "(1+2i)"."""
    if not text.startswith("("):
        return False
    depth = 0
    for k, ch in enumerate(text):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth == 0:
            return k == len(text) - 1
    return False

__all__ = ["RationalFunction", "reduce_fraction"]


class RationalFunction:
    """``numerator / denominator`` with coprime parts and a monic denominator.

    Construct through :func:`reduce_fraction` (or the arithmetic operators); the
    canonical form makes ``==`` a structural comparison.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: MultiPoly, denominator: MultiPoly | None = None, *, _reduced=False):
        if denominator is None:
            denominator = MultiPoly.one(numerator.variables)
        if _reduced:
            self.numerator, self.denominator = numerator, denominator
        else:
            r = reduce_fraction(numerator, denominator)
            self.numerator, self.denominator = r.numerator, r.denominator

    @property
    def variables(self):
        return self.numerator.variables

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunction":
        return cls(p, MultiPoly.one(p.variables), _reduced=True)

    @classmethod
    def constant(cls, variables, c) -> "RationalFunction":
        return cls.from_poly(MultiPoly.constant(variables, c))

    @classmethod
    def gens(cls, variables) -> tuple["RationalFunction", ...]:
        return tuple(cls.from_poly(g) for g in MultiPoly.gens(variables))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise DomainError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise DomainError(f"variable mismatch: {self.variables} vs {other.variables}")
            return RationalFunction.from_poly(other)
        try:
            c = as_gaussian(other)
        except (TypeError, ValueError):
            return None
        return RationalFunction.constant(self.variables, c)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.numerator

    def is_polynomial(self) -> bool:
        return self.denominator.is_constant()

    def is_constant(self) -> bool:
        return self.numerator.is_constant() and self.denominator.is_constant()

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise DomainError("rational function is not constant")
        return self.numerator.constant_value() / self.denominator.constant_value()

    def is_real(self) -> bool:
        return self.numerator.is_real() and self.denominator.is_real()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.denominator == o.denominator:
            return reduce_fraction(self.numerator + o.numerator, self.denominator)
        return reduce_fraction(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_constant():
            c = o.constant_value()
            return RationalFunction(self.numerator.scale(c), self.denominator, _reduced=True) if c else o
        return reduce_fraction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.numerator:
            raise ZeroDivisionError("inverse of zero rational function")
        return reduce_fraction(self.denominator, self.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        # coprime parts stay coprime under powers
        num = self.numerator**n
        den = self.denominator**n
        return RationalFunction(num, den, _reduced=True)

    # -- calculus / substitution -------------------------------------------
    def diff(self, var) -> "RationalFunction":
        n, d = self.numerator, self.denominator
        return reduce_fraction(n.diff(var) * d - n * d.diff(var), d * d)

    def compose(self, subs: Sequence["RationalFunction"]) -> "RationalFunction":
        """Substitute the rational functions ``subs`` for the variables."""
        if len(subs) != len(self.variables):
            raise DomainError("need one substitute per variable")
        subs = [s if isinstance(s, RationalFunction) else RationalFunction.from_poly(s) for s in subs]
        num = _substitute(self.numerator, subs)
        den = _substitute(self.denominator, subs)
        return num / den

    def evaluate(self, point) -> GaussianRational:
        d = self.denominator.evaluate(point)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.numerator.evaluate(point) / d

    # -- equality / rendering ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.numerator == other.numerator and self.denominator == other.denominator
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __str__(self):
        if self.denominator.is_constant() and self.denominator.constant_value() == ONE:
            return str(self.numerator)
        num, den = str(self.numerator), str(self.denominator)
        # bare only when precedence cannot change the reading
        if not (_ATOM_NUM.fullmatch(num) or _wrapped(num)):
            num = f"({num})"
        if not _ATOM_DEN.fullmatch(den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self.variables}, {str(self)!r})"


def _substitute(p: MultiPoly, subs: Sequence[RationalFunction]) -> RationalFunction:
    """p(subs) as a rational function, clearing denominators per variable."""
    target = subs[0].variables
    if not p:
        return RationalFunction.constant(target, 0)
    n = len(subs)
    degs = [p.degree(i) for i in range(n)]
    cache: dict = {}

    def power(poly, i, k, tag):
        key = (i, k, tag)
        if key not in cache:
            cache[key] = poly**k
        return cache[key]

    total = MultiPoly.zero(target)
    for e, c in p.terms.items():
        term = MultiPoly.constant(target, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(subs[i].numerator, i, k, "n")
            if degs[i] - k:
                term = term * power(subs[i].denominator, i, degs[i] - k, "d")
        total = total + term
    den = MultiPoly.one(target)
    for i in range(n):
        if degs[i] > 0:
            den = den * power(subs[i].denominator, i, degs[i], "d")
    return reduce_fraction(total, den)


def reduce_fraction(num: MultiPoly, den: MultiPoly) -> RationalFunction:
    """Reduced, canonically scaled ``num / den``.

    >>> x, = MultiPoly.gens(("x",))
    >>> str(reduce_fraction(x**2 - 1, x - 1))
    'x + 1'
    """
    if num.variables != den.variables:
        raise DomainError(f"variable mismatch: {num.variables} vs {den.variables}")
    if not den:
        raise DomainError("denominator is identically zero")
    if not num:
        return RationalFunction(num, MultiPoly.one(den.variables), _reduced=True)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
    lc = den.leading_coefficient()
    if lc != ONE:
        inv = lc.inverse()
        num = num.scale(inv)
        den = den.scale(inv)
    return RationalFunction(num, den, _reduced=True)
