"""Degree sequences of iterates, minimal recurrences and growth classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from birmap.errors import InconclusiveFitError
from birmap.exact import _flint
from birmap.exact.gaussian import ZERO
from birmap.exact.gcd import use_flint
from birmap.exact.poly import PROJ, Z, MultiPoly
from birmap.maps import ParameterTuple, ProjectiveMap, compose_reduce, family_projective, require_birational

__all__ = [
    "DegreeSequence",
    "RecurrenceFit",
    "GrowthClass",
    "degree_sequence",
    "iterate_reduced",
    "fit_recurrence",
    "berlekamp_massey",
    "dynamical_degree_estimate",
    "growth_class",
    "annihilates",
    "render_z",
    "DEFAULT_TERM_BUDGET",
    "BOUNDED",
    "LINEAR",
    "QUADRATIC",
    "EXPONENTIAL",
    "UNCLASSIFIED",
]

DEFAULT_TERM_BUDGET = 200_000

BOUNDED = "Bounded"
LINEAR = "Linear"
QUADRATIC = "Quadratic"
EXPONENTIAL = "Exponential"
UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class DegreeSequence:
    """Degrees d_1..d_N of the reduced iterates (d_0 = 1 is implicit).

    ``truncated`` is set when the term budget stopped the iteration before
    ``requested`` terms were produced.
    """

    degrees: tuple
    requested: int | None = None
    truncated: bool = False
    term_counts: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be positive integers")
        if self.requested is None:
            object.__setattr__(self, "requested", len(self.degrees))

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    def term(self, n: int) -> int:
        """d_n with d_0 = 1."""
        return 1 if n == 0 else self.degrees[n - 1]

    def to_dict(self) -> dict:
        return {"degrees": list(self.degrees), "requested": self.requested, "truncated": self.truncated}


def _as_seq(seq) -> DegreeSequence:
    return seq if isinstance(seq, DegreeSequence) else DegreeSequence(tuple(seq))


# -- iteration ----------------------------------------------------------------

@dataclass(frozen=True)
class IterateInfo:
    n: int
    degree: int
    terms: int
    is_identity: bool


def iterate_reduced(F: ProjectiveMap, N: int, term_budget: int = DEFAULT_TERM_BUDGET) -> Iterator[IterateInfo]:
    """Yield degree data for F^1..F^N, computing F^n = F ∘ F^(n-1) with reduction.

    Iteration ends early once an iterate's components hold more than
    ``term_budget`` terms in total (that iterate is still reported).
    """
    if use_flint(*F.components):
        yield from _iterate_flint(F, N, term_budget)
        return
    G = F
    for n in range(1, N + 1):
        if n > 1:
            G = compose_reduce(F, G)
        terms = G.term_count()
        yield IterateInfo(n, G.degree, terms, G.is_identity())
        if terms > term_budget:
            return


def _iterate_flint(F: ProjectiveMap, N: int, term_budget: int):
    ctx = _flint.context(PROJ)
    x0, x1, x2 = ctx.gens()
    base = [_flint.to_flint(c) for c in F.components]
    G = base
    for n in range(1, N + 1):
        if n > 1:
            comps = [c.compose(*G) for c in base]
            nonzero = [c for c in comps if c != 0]
            g = nonzero[0]
            for c in nonzero[1:]:
                g = g.gcd(c)
            if g.total_degree() > 0:
                comps = [c / g for c in comps]
            G = comps
        deg = max(c.total_degree() for c in G if c != 0)
        terms = sum(len(c) for c in G)
        ident = deg == 1 and terms == 3 and G[0] * x1 == G[1] * x0 and G[0] * x2 == G[2] * x0
        yield IterateInfo(n, deg, terms, ident)
        if terms > term_budget:
            return


def degree_sequence(params, N: int, term_budget: int = DEFAULT_TERM_BUDGET) -> DegreeSequence:
    """Exact d_1..d_N for the family map (or for a given :class:`ProjectiveMap`).

    >>> degree_sequence(ParameterTuple((0, 0, 1), (0, 1, 0), (0, 0, 1)), 5).degrees
    (2, 3, 5, 8, 13)
    """
    if N < 1:
        raise ValueError("N must be positive")
    if isinstance(params, ParameterTuple):
        require_birational(params)
        F = family_projective(params)
    else:
        F = params
    degs, terms = [], []
    for info in iterate_reduced(F, N, term_budget):
        degs.append(info.degree)
        terms.append(info.terms)
    return DegreeSequence(tuple(degs), N, len(degs) < N, tuple(terms))


# -- recurrences --------------------------------------------------------------

def berlekamp_massey(seq: Sequence) -> list[Fraction]:
    """Connection coefficients [1, c1, ..., cL] of the shortest recurrence over Q.

    s_n + c1 s_(n-1) + ... + cL s_(n-L) = 0 for every L <= n < len(seq).
    """
    s = [Fraction(v) for v in seq]
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n]
        for i in range(1, L + 1):
            d += C[i] * s[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        if len(C) < len(B) + m:
            C = C + [Fraction(0)] * (len(B) + m - len(C))
        for i, bi in enumerate(B):
            C[i + m] -= coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            B, b, m = T, d, 1
        else:
            m += 1
    C = C[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(C))
    return C


@dataclass(frozen=True)
class RecurrenceFit:
    """Monic minimal recurrence d_n = -(c1 d_(n-1) + ... + cL d_(n-L))."""

    coefficients: tuple
    char_poly: MultiPoly
    order: int

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [str(c) for c in self.coefficients],
            "char_poly": render_z(self.char_poly),
        }


def char_poly_from_connection(C: Sequence[Fraction]) -> MultiPoly:
    L = len(C) - 1
    return MultiPoly(Z, {(L - i,): c for i, c in enumerate(C)})


def render_z(p: MultiPoly) -> str:
    """Compact form used in reports, e.g. ``z^2-z-1``."""
    return str(p).replace(" ", "")


def fit_recurrence(seq) -> RecurrenceFit:
    """Minimal monic recurrence over Q annihilating d_1..d_N.

    >>> render_z(fit_recurrence([2, 3, 5, 8, 13, 21, 34, 55]).char_poly)
    'z^2-z-1'
    """
    seq = _as_seq(seq)
    N = len(seq)
    if N < 4:
        raise InconclusiveFitError(f"need at least 4 terms to fit a recurrence, got {N}")
    C = berlekamp_massey(seq.degrees)
    L = len(C) - 1
    if 2 * L > N:
        raise InconclusiveFitError(
            f"fitted order {L} exceeds half of the {N} available terms; extend the sequence"
        )
    return RecurrenceFit(tuple(C[1:]), char_poly_from_connection(C), L)


def annihilates(poly: MultiPoly, seq, start: int = 1) -> int | None:
    """Check sum_k c_k d_(n+k) = 0 for every window starting at index >= ``start``.

    Returns None on success, otherwise the first index n + deg where it fails.
    Indices refer to d_n with d_0 = 1.
    """
    seq = _as_seq(seq)
    deg = poly.degree(0)
    coeffs = {e[0]: c for e, c in poly.terms.items()}
    last = len(seq)
    for n in range(start, last - deg + 1):
        total = sum((c * seq.term(n + k) for k, c in coeffs.items()), ZERO)
        if total:
            return n + deg
    return None


def dynamical_degree_estimate(seq) -> Fraction:
    """Ratio estimator d_N / d_(N-1) of the dynamical degree (exact fraction)."""
    seq = _as_seq(seq)
    if len(seq) < 2:
        raise ValueError("need at least two terms")
    return Fraction(seq[-1], seq[-2])


# -- growth classes -----------------------------------------------------------

@dataclass(frozen=True)
class GrowthClass:
    """Growth tag plus the dynamical degree (exact description and decimal)."""

    tag: str
    dynamical_degree: str
    dynamical_degree_decimal: str
    diagnostics: str = ""

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "dynamical_degree": self.dynamical_degree,
            "dynamical_degree_decimal": self.dynamical_degree_decimal,
            "diagnostics": self.diagnostics,
        }


def _sympy_poly(p: MultiPoly):
    import sympy as sp

    z = sp.Symbol("z")
    expr = sum(sp.Rational(c.re.numerator, c.re.denominator) * z ** e[0] for e, c in p.terms.items())
    return sp.Poly(expr, z, domain="QQ"), z


def growth_class(fit: RecurrenceFit, seq=None) -> GrowthClass:
    """Classify growth from the spectrum of the fitted characteristic polynomial.

    A real root above 1 means exponential growth with that root as dynamical
    degree.  Otherwise the spectrum must consist of roots of unity (and 0);
    the largest multiplicity among them, 1, 2 or 3, gives bounded, linear or
    quadratic growth.
    """
    import sympy as sp

    P, z = _sympy_poly(fit.char_poly)
    if not P.free_symbols or P.degree() <= 0:
        return GrowthClass(UNCLASSIFIED, "", "", "constant characteristic polynomial")
    roots = [r for r in P.real_roots() if r > 1]
    if roots:
        delta = max(roots)
        minpoly = sp.Poly(sp.minimal_polynomial(delta, z), z)
        if isinstance(delta, sp.CRootOf):
            desc = f"largest real root of {_render_sympy(minpoly)}"
        else:
            desc = f"{sp.sstr(delta)} (root of {_render_sympy(minpoly)})"
        return GrowthClass(EXPONENTIAL, desc, _decimal(delta))
    _, factors = sp.factor_list(P.as_expr(), z)
    worst = 0
    diagnostics = []
    for fac, mult in factors:
        fp = sp.Poly(fac, z)
        if fp.degree() == 1 and fp.eval(0) == 0:
            continue  # powers of z only shift the sequence
        if fp.is_cyclotomic:
            worst = max(worst, mult)
        else:
            diagnostics.append(f"non-cyclotomic factor {_render_sympy(fp)}")
    if diagnostics:
        return GrowthClass(UNCLASSIFIED, "", "", "; ".join(diagnostics))
    if worst == 0:
        return GrowthClass(UNCLASSIFIED, "", "", "no root of unity in the spectrum")
    if worst == 1:
        if seq is not None and len(_as_seq(seq)) and max(_as_seq(seq)) > 2 ** 64:
            return GrowthClass(UNCLASSIFIED, "", "", "simple unit roots but unbounded sample")
        return GrowthClass(BOUNDED, "1", "1")
    if worst == 2:
        return GrowthClass(LINEAR, "1", "1")
    if worst == 3:
        return GrowthClass(QUADRATIC, "1", "1")
    return GrowthClass(UNCLASSIFIED, "1", "1", f"root of unity with multiplicity {worst}")


def _render_sympy(p) -> str:
    coeffs = p.all_coeffs()
    deg = len(coeffs) - 1
    m = MultiPoly(Z, {(deg - i,): Fraction(int(c.p), int(c.q)) for i, c in enumerate(coeffs) if c})
    return render_z(m)


def _decimal(value, digits: int = 30) -> str:
    return str(value.evalf(digits))
