"""Bridge between :class:`MultiPoly` (rational coefficients only) and python-flint."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from birmap.exact.gaussian import GaussianRational

try:  # pragma: no cover - exercised implicitly
    import flint
except ImportError:  # pragma: no cover
    flint = None


def available() -> bool:
    return flint is not None


@lru_cache(maxsize=None)
def context(variables: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(variables, "deglex")


def to_flint(p):
    ctx = context(p.variables)
    return ctx.from_dict({e: flint.fmpq(c.re.numerator, c.re.denominator) for e, c in p.terms.items()})


def from_flint(q, variables):
    from birmap.exact.poly import MultiPoly

    terms = {}
    for e, c in q.to_dict().items():
        terms[tuple(int(k) for k in e)] = GaussianRational._raw(
            Fraction(int(c.p), int(c.q)), Fraction(0)
        )
    return MultiPoly(variables, terms, _trusted=True)


def gcd(a, b):
    return from_flint(to_flint(a).gcd(to_flint(b)), a.variables)
