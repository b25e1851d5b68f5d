"""Sparse multivariate polynomials over Q(i).

Terms are stored in a dict mapping exponent tuples to nonzero
:class:`GaussianRational` coefficients, so equal polynomials always have equal
term maps.  The variable tuple fixes the variable order; the term order is
graded lexicographic (total degree first, then exponents left to right).
"""

from __future__ import annotations

import heapq
from typing import Iterable, Mapping, Sequence

from birmap.errors import DomainError, NotDivisibleError
from birmap.exact.gaussian import ONE, ZERO, GaussianRational, as_gaussian, format_scalar

__all__ = ["MultiPoly", "XY", "PROJ", "Z"]

XY = ("x", "y")
PROJ = ("x0", "x1", "x2")
Z = ("z",)


def _grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable polynomial with exact coefficients in a fixed variable tuple."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None, *, _trusted=False):
        self.variables = tuple(variables)
        if _trusted:
            self.terms = terms
        else:
            n = len(self.variables)
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n or any(e < 0 for e in exp):
                    raise DomainError(f"bad exponent vector {exp} for variables {self.variables}")
                c = as_gaussian(c)
                if c:
                    clean[exp] = clean.get(exp, ZERO) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def constant(cls, variables, c) -> "MultiPoly":
        variables = tuple(variables)
        c = as_gaussian(c)
        if not c:
            return cls(variables, {}, _trusted=True)
        return cls(variables, {(0,) * len(variables): c}, _trusted=True)

    @classmethod
    def zero(cls, variables) -> "MultiPoly":
        return cls(tuple(variables), {}, _trusted=True)

    @classmethod
    def one(cls, variables) -> "MultiPoly":
        return cls.constant(variables, ONE)

    @classmethod
    def gens(cls, variables) -> tuple["MultiPoly", ...]:
        variables = tuple(variables)
        n = len(variables)
        out = []
        for i in range(n):
            exp = tuple(1 if j == i else 0 for j in range(n))
            out.append(cls(variables, {exp: ONE}, _trusted=True))
        return tuple(out)

    @classmethod
    def monomial(cls, variables, exp, c=ONE) -> "MultiPoly":
        return cls(variables, {tuple(exp): c})

    def _new(self, terms) -> "MultiPoly":
        return MultiPoly(self.variables, terms, _trusted=True)

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise DomainError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        try:
            c = as_gaussian(other)
        except (TypeError, ValueError):
            return None
        return MultiPoly.constant(self.variables, c)

    # -- inspection ---------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient(self, exp) -> GaussianRational:
        return self.terms.get(tuple(exp), ZERO)

    def is_real(self) -> bool:
        return all(not c.im for c in self.terms.values())

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var) -> int:
        i = self._index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def used_variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def _index(self, var) -> int:
        if isinstance(var, int):
            return var
        return self.variables.index(var)

    def leading_exponent(self):
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        return max(self.terms, key=_grlex_key)

    def leading_coefficient(self) -> GaussianRational:
        return self.terms[self.leading_exponent()]

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) > len(self.terms):
            a, b = o.terms, self.terms
        else:
            a, b = self.terms, o.terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

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
        if isinstance(other, MultiPoly):
            o = self._coerce(other)
            return self._mul_poly(o)
        try:
            c = as_gaussian(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def _mul_poly(self, o: "MultiPoly") -> "MultiPoly":
        if not self.terms or not o.terms:
            return self._new({})
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return self._new({e: c for e, c in out.items() if c})

    def scale(self, c) -> "MultiPoly":
        c = as_gaussian(c)
        if not c:
            return self._new({})
        if c == ONE:
            return self
        return self._new({e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.one(self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar only; use :meth:`divexact` for polynomials."""
        if isinstance(other, MultiPoly):
            return NotImplemented
        c = as_gaussian(other)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero")
        return self.scale(c.inverse())

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(self.leading_coefficient().inverse())

    def shift(self, exp) -> "MultiPoly":
        """Multiply by the monomial with exponent ``exp``."""
        return self._new({tuple(x + y for x, y in zip(e, exp)): c for e, c in self.terms.items()})

    def monomial_content(self) -> tuple:
        if not self.terms:
            return (0,) * self.nvars
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            for i, k in enumerate(e):
                if k < m[i]:
                    m[i] = k
        return tuple(m)

    def unshift(self, exp) -> "MultiPoly":
        """Divide by the monomial with exponent ``exp`` (must divide every term)."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(x - y for x, y in zip(e, exp))
            if any(k < 0 for k in ne):
                raise NotDivisibleError("monomial does not divide polynomial")
            out[ne] = c
        return self._new(out)

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient ``self / other``; raises :class:`NotDivisibleError` otherwise."""
        q, r = self.divmod(other)
        if r:
            raise NotDivisibleError("polynomial division leaves a remainder")
        return q

    def divmod(self, other: "MultiPoly"):
        """Multivariate division by a single divisor in graded-lex order."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self._new({}), self._new({})
        if other.is_constant():
            inv = other.constant_value().inverse()
            return self.scale(inv), self._new({})
        lead_e = other.leading_exponent()
        lead_inv = other.terms[lead_e].inverse()
        rest = [(e, c) for e, c in other.terms.items() if e != lead_e]
        work = dict(self.terms)
        heap = [(-sum(e), tuple(-k for k in e)) for e in work]
        heapq.heapify(heap)
        quotient: dict = {}
        remainder: dict = {}
        while heap:
            _, neg = heapq.heappop(heap)
            e = tuple(-k for k in neg)
            c = work.pop(e, None)
            if c is None or not c:
                continue
            qe = tuple(x - y for x, y in zip(e, lead_e))
            if any(k < 0 for k in qe):
                remainder[e] = c
                continue
            qc = c * lead_inv
            quotient[qe] = qc
            for re_, rc in rest:
                t = tuple(x + y for x, y in zip(qe, re_))
                old = work.get(t)
                if old is None:
                    work[t] = -(qc * rc)
                    heapq.heappush(heap, (-sum(t), tuple(-k for k in t)))
                else:
                    work[t] = old - qc * rc
        return self._new(quotient), self._new(remainder)

    def divides(self, other: "MultiPoly") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        if not self.terms:
            return not other.terms
        return not other.divmod(self)[1]

    # -- evaluation / substitution -----------------------------------------
    def evaluate(self, point: Sequence) -> GaussianRational:
        pt = [as_gaussian(v) for v in point]
        if len(pt) != self.nvars:
            raise DomainError("point dimension does not match variables")
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``subs[i]`` for the i-th variable."""
        if len(subs) != self.nvars:
            raise DomainError("need one substitute per variable")
        target = subs[0].variables
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.one(target), 1: s} for s in subs]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        total = MultiPoly.zero(target)
        for e, c in self.sorted_terms():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def diff(self, var) -> "MultiPoly":
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                out[ne] = c * k
        return self._new(out)

    def coefficients_in(self, var) -> dict[int, "MultiPoly"]:
        """Split into ``{k: coefficient of var**k}``; coefficients keep all variables."""
        i = self._index(var)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {k: self._new(t) for k, t in parts.items()}

    def homogenize(self, variables: Sequence[str], degree: int | None = None) -> "MultiPoly":
        """Homogenize with a new leading variable (index 0 of ``variables``)."""
        d = self.total_degree() if degree is None else degree
        out = {}
        for e, c in self.terms.items():
            out[(d - sum(e),) + e] = c
        return MultiPoly(tuple(variables), out, _trusted=True)

    def dehomogenize(self, variables: Sequence[str]) -> "MultiPoly":
        """Set the first variable to 1."""
        out = {}
        for e, c in self.terms.items():
            t = e[1:]
            s = out.get(t)
            out[t] = c if s is None else s + c
        return MultiPoly(tuple(variables), {e: c for e, c in out.items() if c}, _trusted=True)

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        if len(variables) != self.nvars:
            raise DomainError("rename needs the same number of variables")
        return MultiPoly(variables, self.terms, _trusted=True)

    # -- equality / rendering ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            c = as_gaussian(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.variables}, {str(self)!r})"

    def __str__(self):
        return render_poly(self)


def _render_monomial(variables, exp) -> str:
    parts = []
    for v, k in zip(variables, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def _expr_scalar(c: GaussianRational) -> str:
    # in expressions "2/5i" would read as 2/(5i), so spell the unit out
    text = format_scalar(c)
    if c.im.denominator == 1:
        return text
    return text[:-1] + "*i"


def render_poly(p: MultiPoly) -> str:
    """Human-readable sum of monomials; :func:`parse_poly` inverts it exactly."""
    if not p.terms:
        return "0"
    pieces = []
    for exp, c in p.sorted_terms():
        mono = _render_monomial(p.variables, exp)
        if c.is_real():
            negative = c.re < 0
            mag = -c if negative else c
            coef = format_scalar(mag)
        else:
            negative = False
            coef = f"({_expr_scalar(c)})"
        if mono:
            body = mono if coef == "1" else f"{coef}*{mono}"
        else:
            body = coef
        pieces.append(("-" if negative else "+", body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def poly_from_coeffs(variables, coeff_map: Mapping[Iterable[int], object]) -> MultiPoly:
    return MultiPoly(variables, {tuple(e): c for e, c in coeff_map.items()})
