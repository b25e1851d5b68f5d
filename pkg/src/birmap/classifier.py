"""Sub-case classification of degenerate family members and predicted degree laws.

Degenerate members satisfy (ag)12 = 0 or (bg)12 = 0.  The first family splits
by which of a1, a2, g1, g2 vanish; the second by whether g1 g2 != 0, g1 = 0 or
g2 = 0, and the last two further by the period of an associated Möbius map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from birmap.degrees import (
    BOUNDED,
    EXPONENTIAL,
    LINEAR,
    DegreeSequence,
    annihilates,
    degree_sequence,
    fit_recurrence,
    growth_class,
    render_z,
)
from birmap.errors import BirmapError, OutOfScopeError
from birmap.exact.gaussian import format_scalar
from birmap.exact.poly import Z, MultiPoly
from birmap.maps import NON_DEGENERATE, ParameterTuple, require_birational
from birmap.moebius import (
    MoebiusMap,
    geometric_sum_vanishing,
    periodicity_exact,
    root_of_unity_order,
)

__all__ = [
    "CaseReport",
    "PredictionModel",
    "VerificationReport",
    "classify",
    "predicted_model",
    "cross_check",
    "h_map",
    "SUBCASES",
    "ALPHA_GAMMA",
    "BETA_GAMMA_GENERIC",
    "BETA_GAMMA_GAMMA1",
    "BETA_GAMMA_GAMMA2",
]

ALPHA_GAMMA = "AlphaGamma"
BETA_GAMMA_GENERIC = "BetaGamma-generic"
BETA_GAMMA_GAMMA1 = "BetaGamma-gamma1"
BETA_GAMMA_GAMMA2 = "BetaGamma-gamma2"

SUBCASES = (
    "CD2-i", "CD2-ii", "CD2-iii",
    "CD3-i", "CD3-ii", "CD3-iii",
    "G1-i-a", "G1-i-b", "G1-i-c",
    "G1-ii-a", "G1-ii-b",
    "G2-a", "G2-b1", "G2-b2",
)


@dataclass(frozen=True)
class Derived:
    value: Any
    provenance: str

    def to_dict(self):
        v = self.value
        if not isinstance(v, (int, str, type(None), bool)):
            v = format_scalar(v) if hasattr(v, "re") else str(v)
        return {"value": v, "provenance": self.provenance}


@dataclass(frozen=True)
class CaseReport:
    family: str
    subcase: str
    parameters_used: dict = field(default_factory=dict)
    both_families: bool = False
    alternate: "CaseReport | None" = None

    def get(self, name, default=None):
        d = self.parameters_used.get(name)
        return default if d is None else d.value

    def to_dict(self) -> dict:
        out = {
            "family": self.family,
            "subcase": self.subcase,
            "parameters_used": {k: v.to_dict() for k, v in self.parameters_used.items()},
            "both_families": self.both_families,
        }
        if self.alternate is not None:
            out["alternate"] = self.alternate.to_dict()
        return out


def h_map(params: ParameterTuple) -> MoebiusMap:
    """The one-dimensional Möbius map whose period drives the g1 = 0 and g2 = 0 branches.

    For g1 = 0 it is y -> (b0 + b2 y)/(g0 + g2 y), the second component
    restricted to y.  For g2 = 0 the square of f acts on x by
    x -> a0 + a2 (b0 + b1 x)/(g0 + g1 x).
    """
    a, b, g = params.alpha, params.beta, params.gamma
    if not g[1]:
        return MoebiusMap(b[2], b[0], g[2], g[0])
    if not g[2]:
        T = MoebiusMap(a[2], a[0], 0, 1)
        M = MoebiusMap(b[1], b[0], g[1], g[0])
        return T @ M
    raise OutOfScopeError("h is only defined when g1 = 0 or g2 = 0")


def _classify_alpha_gamma(p: ParameterTuple) -> CaseReport:
    a1, a2 = p.alpha[1], p.alpha[2]
    g1, g2 = p.gamma[1], p.gamma[2]
    used = {"(ag)12": Derived(p.ag12, "a1 g2 - a2 g1")}
    if a1 and a2 and g1 and g2:
        sub = "CD2-i"
    elif not a1 and not g1:
        sub = "CD2-ii"
    elif not a2 and not g2:
        sub = "CD2-iii"
    else:  # excluded by birationality
        raise BirmapError(f"(ag)12 = 0 but no sub-case matches {p}")
    used["alpha1"] = Derived(a1, "coefficient of x in the first component")
    return CaseReport(ALPHA_GAMMA, sub, used)


def _classify_beta_gamma(p: ParameterTuple) -> CaseReport:
    a1, a2 = p.alpha[1], p.alpha[2]
    g1, g2 = p.gamma[1], p.gamma[2]
    used = {"(bg)12": Derived(p.bg12, "b1 g2 - b2 g1")}
    if g1 and g2:
        if a1 and a2:
            sub = "CD3-i"
        elif not a1:
            sub = "CD3-ii"
        else:
            sub = "CD3-iii"
        used["alpha1"] = Derived(a1, "coefficient of x in the first component")
        return CaseReport(BETA_GAMMA_GENERIC, sub, used)

    h = h_map(p)
    per = periodicity_exact(h)
    used["h"] = Derived(str(h), "matrix of the Möbius map driving the second coordinate")
    used["j"] = Derived(per.trace_invariant, "tr(h)^2 / det(h)")
    if per.periodic:
        used["k"] = Derived(per.period, f"period of h from j = {format_scalar(per.trace_invariant)}, confirmed by h^k scalar")

    if not g1:
        family = BETA_GAMMA_GAMMA1
        used["alpha1"] = Derived(a1, "coefficient of x in the first component")
        if a2:
            if not per.periodic:
                sub = "G1-i-a"
            else:
                k = per.period
                n = geometric_sum_vanishing(a1, k)
                order = root_of_unity_order(a1**k)
                used["alpha1^k order"] = Derived(order, "root-of-unity order of alpha1^k in Q(i), None if not a root of unity")
                if n is None:
                    sub = "G1-i-b"
                else:
                    sub = "G1-i-c"
                    used["n"] = Derived(n, "least n with 1 + a1^k + ... + a1^(nk) = 0")
                    used["P"] = Derived((n + 1) * k, "(n + 1) k, the period of the degree sequence")
        else:
            sub = "G1-ii-b" if per.periodic else "G1-ii-a"
        used["alpha1_order"] = Derived(root_of_unity_order(a1), "order of alpha1 as a root of unity (None if not one)")
        return CaseReport(family, sub, used)

    family = BETA_GAMMA_GAMMA2
    used["alpha1"] = Derived(a1, "coefficient of x in the first component")
    if a1:
        sub = "G2-a"
    else:
        sub = "G2-b2" if per.periodic else "G2-b1"
    return CaseReport(family, sub, used)


def classify(params: ParameterTuple) -> CaseReport:
    """Family and sub-case tag of a degenerate birational parameter tuple."""
    rep = require_birational(params)
    if rep.degeneracy == NON_DEGENERATE:
        raise OutOfScopeError(
            "map is non-degenerate ((ag)12 and (bg)12 both nonzero); only degenerate members are classified"
        )
    ag = not params.ag12
    bg = not params.bg12
    if ag and bg:
        first = _classify_alpha_gamma(params)
        second = _classify_beta_gamma(params)
        return CaseReport(first.family, first.subcase, first.parameters_used, True, second)
    if ag:
        return _classify_alpha_gamma(params)
    return _classify_beta_gamma(params)


# -- prediction models --------------------------------------------------------

_z = MultiPoly.gens(Z)[0]
_one = MultiPoly.one(Z)

FIB_MATRIX = ((2, 1), (-1, -1))
LINEAR_MATRIX = ((2, 1), (-1, 0))


@dataclass(frozen=True)
class PredictionModel:
    """Static degree law for one sub-case.

    ``picard_matrix`` is the action on the Picard group after the blow-ups
    that make the lifted map algebraically stable; when present its
    characteristic polynomial equals ``char_poly``.
    """

    subcase: str
    char_poly: MultiPoly
    picard_matrix: tuple | None
    closed_form: str
    initial_degrees: tuple
    growth: str
    law: str
    k: int | None = None
    period: int | None = None
    provenance: str = ""

    def predict(self, N: int) -> tuple:
        return tuple(self.term(n) for n in range(1, N + 1))

    def term(self, n: int) -> int:
        law = self.law
        if n == 0:
            return 1
        if law == "pow2":
            return 2**n
        if law == "fib":
            a, b = 1, 2
            for _ in range(n - 1):
                a, b = b, a + b
            return b
        if law == "linear":
            return 1 + n
        if law == "eventually_constant":
            return min(n + 1, self.k)
        if law == "folded":
            r = n % self.period
            return 1 if r == 0 else min(r + 1, self.k, self.period - r + 1)
        if law == "constant2":
            return 2
        if law == "periodic":
            return 1 if n % self.period == 0 else 2
        raise ValueError(f"unknown law {law!r}")

    @property
    def order(self) -> int:
        return self.char_poly.degree(0)

    def to_dict(self) -> dict:
        return {
            "subcase": self.subcase,
            "char_poly": render_z(self.char_poly),
            "picard_matrix": [list(r) for r in self.picard_matrix] if self.picard_matrix else None,
            "closed_form": self.closed_form,
            "initial_degrees": list(self.initial_degrees),
            "growth": self.growth,
            "k": self.k,
            "period": self.period,
        }


def matrix_char_poly(m) -> MultiPoly:
    """det(z I - m) for a 1x1 or 2x2 integer matrix."""
    if len(m) == 1:
        return _z - m[0][0]
    (a, b), (c, d) = m
    return _z * _z - _z * (a + d) + (a * d - b * c)


def predicted_model(report: CaseReport) -> PredictionModel:
    """Degree law, characteristic polynomial and seeds for ``report.subcase``."""
    sub = report.subcase
    if sub in ("CD2-i", "CD3-i"):
        return PredictionModel(sub, _z - 2, ((2,),), "2^n", (2,), EXPONENTIAL, "pow2",
                               provenance="F is algebraically stable on P^2, so F* acts on Pic by multiplication by 2")
    if sub in ("CD2-ii", "CD3-ii", "G2-a"):
        return PredictionModel(sub, _z * _z - _z - 1, FIB_MATRIX, "Fibonacci-recurrent", (2, 3), EXPONENTIAL, "fib",
                               provenance="lift after blowing up the collapse point that hits an indeterminacy point")
    if sub in ("CD2-iii", "CD3-iii", "G1-i-a"):
        return PredictionModel(sub, (_z - 1) ** 2, LINEAR_MATRIX, "1+n", (2, 3), LINEAR, "linear",
                               provenance="lift after the blow-ups resolving the orbit collision")
    k = report.get("k")
    if sub == "G1-i-b":
        poly = _z ** (k - 2) * (_z - 1) ** 2
        seeds = tuple(min(n + 1, k) for n in range(1, k + 1))
        return PredictionModel(sub, poly, None, "eventually-constant-k", seeds, BOUNDED, "eventually_constant", k=k,
                               provenance="z^(k-2) (z-1)^2 up to sign")
    if sub == "G1-i-c":
        P = report.get("P")
        seeds = tuple(min(r + 1, k, P - r + 1) if r % P else 1 for r in range(1, P + 1))
        return PredictionModel(sub, _z**P - 1, None, "periodic with stated period", seeds, BOUNDED, "folded", k=k, period=P)
    if sub in ("G1-ii-a", "G2-b1"):
        return PredictionModel(sub, _z - 1, None, "2 constant", (2,), BOUNDED, "constant2")
    if sub == "G1-ii-b":
        seeds = tuple(1 if n % k == 0 else 2 for n in range(1, k + 1))
        return PredictionModel(sub, _z**k - 1, None, "periodic with stated period", seeds, BOUNDED, "periodic", k=k, period=k)
    if sub == "G2-b2":
        seeds = tuple(1 if n % (2 * k) == 0 else 2 for n in range(1, 2 * k + 1))
        return PredictionModel(sub, _z ** (2 * k) - 1, None, "2k-periodic", seeds, BOUNDED, "periodic", k=k, period=2 * k)
    raise ValueError(f"unknown sub-case {sub!r}")


# -- cross check --------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    subcase: str
    sequence: DegreeSequence
    predicted: tuple
    closed_form_mismatch: int | None
    annihilation_failure: int | None
    fitted_char_poly: str | None
    growth_expected: str
    growth_found: str | None
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return (
            self.closed_form_mismatch is None
            and self.annihilation_failure is None
            and self.growth_found == self.growth_expected
            and not self.sequence.truncated
        )

    def to_dict(self) -> dict:
        return {
            "subcase": self.subcase,
            "passed": self.passed,
            "degrees": list(self.sequence.degrees),
            "predicted": list(self.predicted),
            "closed_form_mismatch": self.closed_form_mismatch,
            "annihilation_failure": self.annihilation_failure,
            "fitted_char_poly": self.fitted_char_poly,
            "growth_expected": self.growth_expected,
            "growth_found": self.growth_found,
            "truncated": self.sequence.truncated,
            "notes": list(self.notes),
        }


def cross_check(params: ParameterTuple, N: int, seq: DegreeSequence | None = None) -> VerificationReport:
    """Compare computed degrees with the sub-case's predicted law.

    For bounded and linear models the sequence is extended, if needed, to
    2 * order + 2 terms so the fitted recurrence is certified; these
    iterates are cheap.  Mismatch indices are 1-based positions d_n.
    """
    report = classify(params)
    model = predicted_model(report)
    notes = []
    n_used = N
    if model.growth != EXPONENTIAL:
        n_used = max(N, 2 * model.order + 2)
        if n_used > N:
            notes.append(f"extended to {n_used} terms to certify the fit")
    if seq is None or len(seq) < n_used:
        seq = degree_sequence(params, n_used)
    predicted = model.predict(len(seq))
    mismatch = next((i + 1 for i, (a, b) in enumerate(zip(seq.degrees, predicted)) if a != b), None)
    ann = annihilates(model.char_poly, seq)
    try:
        fit = fit_recurrence(seq)
        fitted = render_z(fit.char_poly)
        found = growth_class(fit, seq).tag
    except BirmapError as exc:
        fitted, found = None, None
        notes.append(f"fit failed: {exc}")
    return VerificationReport(report.subcase, seq, predicted, mismatch, ann, fitted, model.growth, found, tuple(notes))
