"""Multivariate GCD over Q(i).

The pure-Python route splits each polynomial into content and primitive part
with respect to one variable, recurses on the contents (which involve fewer
variables) and runs a subresultant PRS on the primitive parts.  Results are
normalized to leading coefficient 1 in graded-lex order.

When every coefficient is rational and python-flint is importable, the same
contract is served by ``fmpq_mpoly.gcd``; :func:`set_backend` pins either route.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from birmap.errors import DomainError
from birmap.exact import _flint
from birmap.exact.poly import MultiPoly

__all__ = ["poly_gcd", "poly_gcd_many", "poly_lcm", "set_backend", "get_backend", "backend"]

_BACKEND = os.environ.get("BIRMAP_BACKEND", "auto")


def set_backend(name: str) -> None:
    """Select ``"auto"`` (flint when applicable) or ``"pure"``."""
    global _BACKEND
    if name not in ("auto", "pure"):
        raise ValueError(f"unknown backend {name!r}")
    _BACKEND = name


def get_backend() -> str:
    return _BACKEND


@contextmanager
def backend(name: str):
    old = _BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def use_flint(*polys: MultiPoly) -> bool:
    return _BACKEND == "auto" and _flint.available() and all(p.is_real() for p in polys)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor, monic in graded-lex order.

    >>> x, y = MultiPoly.gens(("x", "y"))
    >>> poly_gcd(x**2 - y**2, x**2 + 2*x*y + y**2)
    MultiPoly(('x', 'y'), 'x + y')
    """
    if a.variables != b.variables:
        raise DomainError(f"variable mismatch: {a.variables} vs {b.variables}")
    if not a and not b:
        raise DomainError("gcd(0, 0) is undefined")
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.one(a.variables)
    if use_flint(a, b):
        return _flint.gcd(a, b).monic()
    return _gcd(a, b).monic()


def poly_gcd_many(polys) -> MultiPoly:
    polys = [p for p in polys if p]
    if not polys:
        raise DomainError("gcd of zero polynomials is undefined")
    g = polys[0].monic()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, p)
    return g


def poly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if not a or not b:
        raise DomainError("lcm with zero")
    return (a * b).divexact(poly_gcd(a, b)).monic()


# -- pure route --------------------------------------------------------------

def _gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if not a:
        return b
    if not b:
        return a
    one = MultiPoly.one(a.variables)
    if a.is_constant() or b.is_constant():
        return one
    ma, mb = a.monomial_content(), b.monomial_content()
    m = tuple(min(x, y) for x, y in zip(ma, mb))
    if any(ma):
        a = a.unshift(ma)
    if any(mb):
        b = b.unshift(mb)
    g = _gcd_no_monomial(a, b)
    return g.shift(m) if any(m) else g


def _gcd_no_monomial(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    one = MultiPoly.one(a.variables)
    if a.is_constant() or b.is_constant():
        return one
    if b.divides(a):
        return b
    if a.divides(b):
        return a
    used_a, used_b = a.used_variables(), b.used_variables()
    common = used_a & used_b
    if not common:
        # any common factor would have to be free of every variable
        return one
    v = min(common, key=lambda i: (max(a.degree(i), b.degree(i)), i))
    for w in sorted(used_a - used_b):
        a = _content(a, w)
        if a.is_constant():
            return one
    for w in sorted(used_b - used_a):
        b = _content(b, w)
        if b.is_constant():
            return one
    if a.degree(v) < 1 or b.degree(v) < 1:
        return _gcd(a, b)

    ca, cb = _content(a, v), _content(b, v)
    c = _gcd(ca, cb)
    pa = a.divexact(ca) if not ca.is_constant() else a
    pb = b.divexact(cb) if not cb.is_constant() else b
    A = _dense(pa, v)
    B = _dense(pb, v)
    if len(A) < len(B):
        A, B = B, A
    G = _subresultant_gcd(A, B, one)
    g = _from_dense(G, v, a.variables)
    return g * c if not c.is_constant() else g


def _content(p: MultiPoly, v: int) -> MultiPoly:
    """GCD of the coefficients of ``p`` viewed as a polynomial in variable ``v``."""
    coeffs = sorted(p.coefficients_in(v).values(), key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    if g.is_constant():
        return MultiPoly.one(p.variables)
    return g.monic()


def _dense(p: MultiPoly, v: int) -> list[MultiPoly]:
    parts = p.coefficients_in(v)
    deg = max(parts)
    zero = MultiPoly.zero(p.variables)
    return [parts.get(k, zero) for k in range(deg + 1)]


def _from_dense(coeffs: list[MultiPoly], v: int, variables) -> MultiPoly:
    n = len(variables)
    out = MultiPoly.zero(variables)
    for k, c in enumerate(coeffs):
        if c:
            exp = tuple(k if i == v else 0 for i in range(n))
            out = out + c.shift(exp)
    return out


def _strip(R):
    while R and not R[-1]:
        R.pop()
    return R


def _prem(A, B):
    """Pseudo-remainder lc(B)^(degA-degB+1) * A mod B for dense coefficient lists."""
    R = list(A)
    dB = len(B) - 1
    lcB = B[-1]
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= dB:
        lead = R[-1]
        shift = len(R) - 1 - dB
        R = [lcB * r for r in R]
        for i, b in enumerate(B):
            if b:
                R[i + shift] = R[i + shift] - lead * b
        R.pop()
        _strip(R)
        e -= 1
    if e > 0 and R:
        f = lcB**e
        R = [f * r for r in R]
    return R


def _primitive_dense(C):
    g = None
    for c in sorted((c for c in C if c), key=len):
        g = c if g is None else _gcd(g, c)
        if g.is_constant():
            return C
    return [c.divexact(g) if c else c for c in C]


def _subresultant_gcd(A, B, one):
    g = one
    h = one
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            return _primitive_dense(B)
        if len(R) == 1:
            return [one]
        divisor = g * h**delta
        A, B = B, [r.divexact(divisor) if r else r for r in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).divexact(h ** (delta - 1))
