"""Normal forms, invariant fibrations and first integrals for zero-entropy members.

Each zero-entropy sub-case is conjugated by an affine change
(x, y) -> (ax + b, cy + d) to one of five shapes:

    affine-over-x    (a0 + a1 x, (b0 + y)/x)
    affine-over-sum  (a0 + a1 x, b0/(x + y))
    skew             (a0 + a1 x + y, b0/(g0 + y))
    product          (a0 + a1 x, b0/(g0 + y))
    swap             (y, b0/(g0 + x))

and the catalog of fibrations is written in those coordinates.  A fibration
H comes with the rule it obeys under f: H∘f = H, c·H, H + 1 or φ(H) for a
Möbius φ.  Checks are exact structural equalities of reduced rational
functions; only when a coefficient leaves Q(i) do we sample numerically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from birmap.classifier import CaseReport, classify
from birmap.degrees import DEFAULT_TERM_BUDGET, iterate_reduced
from birmap.errors import DomainError, InvariantViolation, UnsupportedCaseError
from birmap.exact.gaussian import ONE, ZERO, GaussianRational, as_gaussian, format_scalar
from birmap.exact.poly import XY
from birmap.exact.ratfunc import RationalFunction
from birmap.maps import ParameterTuple, PlaneMap, ProjectiveMap, build_family_map, homogenize, require_birational
from birmap.moebius import (
    MoebiusMap,
    _mpc,
    moebius_from_h,
    moebius_from_m,
    periodicity_exact,
    root_of_unity_order,
    root_pair_data,
)

__all__ = [
    "INVARIANT",
    "SCALE",
    "TRANSLATE",
    "MOEBIUS",
    "AFFINE_OVER_X",
    "AFFINE_OVER_SUM",
    "SKEW",
    "PRODUCT",
    "SWAP",
    "Transform",
    "FibrationSpec",
    "FibrationVerdict",
    "AffineConjugation",
    "NormalFormMap",
    "TransversalityVerdict",
    "PeriodicityReport",
    "normal_form",
    "shape_map",
    "builtin_fibrations",
    "verify_fibration",
    "verify_catalog",
    "transversality",
    "detect_periodicity",
    "pull_back_spec",
    "split_jacobian",
    "double_root_jacobian",
    "NUMERIC_TOLERANCE",
    "NUMERIC_POINTS",
    "DEFAULT_PERIOD_BOUND",
]

INVARIANT = "Invariant"
SCALE = "Scale"
TRANSLATE = "Translate"
MOEBIUS = "Moebius"

AFFINE_OVER_X = "affine-over-x"
AFFINE_OVER_SUM = "affine-over-sum"
SKEW = "skew"
PRODUCT = "product"
SWAP = "swap"

NUMERIC_PRECISION = 128
NUMERIC_POINTS = 25
NUMERIC_TOLERANCE = Fraction(1, 10**30)
POLE_GUARD = Fraction(1, 1000)
DEFAULT_PERIOD_BOUND = 24


def _xy():
    return RationalFunction.gens(XY)


# -- transforms and specs -----------------------------------------------------

@dataclass(frozen=True)
class Transform:
    """How a fibration moves under f.

    ``factor`` holds the exact scale for Scale; ``numeric_factor`` an mpmath
    value when the scale is not in Q(i).  ``moebius`` is used by Moebius.
    """

    kind: str
    factor: GaussianRational | None = None
    numeric_factor: Any = None
    moebius: MoebiusMap | None = None

    @classmethod
    def invariant(cls):
        return cls(INVARIANT)

    @classmethod
    def translate(cls):
        return cls(TRANSLATE)

    @classmethod
    def scale(cls, c):
        return cls(SCALE, factor=as_gaussian(c))

    @classmethod
    def scale_numeric(cls, c):
        return cls(SCALE, numeric_factor=c)

    @classmethod
    def along(cls, phi: MoebiusMap):
        if phi.is_scalar():
            return cls(INVARIANT)
        return cls(MOEBIUS, moebius=phi)

    @property
    def exact(self) -> bool:
        return self.numeric_factor is None

    def expected(self, H: RationalFunction) -> RationalFunction:
        """The right-hand side T(H) that H∘f must equal."""
        if self.kind == INVARIANT:
            return H
        if self.kind == TRANSLATE:
            return H + 1
        if self.kind == SCALE:
            if self.factor is None:
                raise DomainError("numeric scale has no exact right-hand side")
            return H * self.factor
        if self.kind == MOEBIUS:
            return self.moebius.compose_function(H)
        raise ValueError(f"unknown transform {self.kind!r}")

    def expected_numeric(self, value):
        if self.kind == INVARIANT:
            return value
        if self.kind == TRANSLATE:
            return value + 1
        if self.kind == SCALE:
            c = self.numeric_factor if self.factor is None else _mpc(self.factor)
            return c * value
        if self.kind == MOEBIUS:
            m = self.moebius
            return (_mpc(m.a) * value + _mpc(m.b)) / (_mpc(m.c) * value + _mpc(m.d))
        raise ValueError(f"unknown transform {self.kind!r}")

    def __str__(self):
        if self.kind == SCALE:
            c = format_scalar(self.factor) if self.factor is not None else _fmt_num(self.numeric_factor)
            return f"Scale({c})"
        if self.kind == MOEBIUS:
            return f"Moebius{self.moebius}"
        return self.kind


def _fmt_num(z) -> str:
    import mpmath

    return mpmath.nstr(z, 20)


# A numeric fibration returns (numerator, denominator) so poles can be avoided.
NumericFn = Callable[[Any, Any], tuple]


@dataclass(frozen=True)
class FibrationSpec:
    label: str
    transform: Transform
    function: RationalFunction | None = None
    numeric: NumericFn | None = field(default=None, compare=False)
    expected_degenerate: bool = False
    note: str = ""
    # H = base^exponent; lets H∘f be formed as (base∘f)^exponent
    base: RationalFunction | None = field(default=None, compare=False)
    exponent: int = 1

    def __post_init__(self):
        if self.function is None and self.numeric is None:
            raise DomainError("a fibration needs an exact function or a numeric evaluator")

    @classmethod
    def power(cls, label, transform, base: RationalFunction, exponent: int, note: str = "") -> "FibrationSpec":
        return cls(label, transform, base**exponent, note=note, base=base, exponent=exponent)

    def pullback_by(self, f: PlaneMap) -> RationalFunction:
        """H∘f, using the power structure when present."""
        if self.base is not None:
            return f.pullback(self.base) ** self.exponent
        return f.pullback(self.function)

    @property
    def exact(self) -> bool:
        return self.function is not None and self.transform.exact

    @property
    def degenerate(self) -> bool:
        return self.function is not None and self.function.is_constant()

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "transform": str(self.transform),
            "function": str(self.function) if self.function is not None else None,
            "exact": self.exact,
            "degenerate": self.degenerate,
            "note": self.note,
        }


@dataclass(frozen=True)
class FibrationVerdict:
    label: str
    transform: str
    status: str  # pass, fail or degenerate
    method: str  # exact or numeric
    detail: str = ""
    expected_degenerate: bool = False

    @property
    def passed(self) -> bool:
        return self.status == "pass" or (self.status == "degenerate" and self.expected_degenerate)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "transform": self.transform,
            "status": self.status,
            "method": self.method,
            "passed": self.passed,
            "detail": self.detail,
        }


# -- normal forms -------------------------------------------------------------

@dataclass(frozen=True)
class AffineConjugation:
    """φ(x, y) = (a x + b, c y + d)."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, as_gaussian(getattr(self, name)))
        if not (self.a and self.c):
            raise InvariantViolation("affine conjugation needs a c != 0")

    @classmethod
    def identity(cls):
        return cls(ONE, ZERO, ONE, ZERO)

    def is_identity(self) -> bool:
        return self == AffineConjugation.identity()

    def as_map(self) -> PlaneMap:
        x, y = _xy()
        return PlaneMap(x * self.a + self.b, y * self.c + self.d)

    def inverse_map(self) -> PlaneMap:
        x, y = _xy()
        return PlaneMap((x - self.b) / self.a, (y - self.d) / self.c)

    def to_dict(self) -> dict:
        return {k: format_scalar(getattr(self, k)) for k in "abcd"}


def shape_map(shape: str, coeffs: dict) -> PlaneMap:
    x, y = _xy()
    c = {k: as_gaussian(v) for k, v in coeffs.items()}
    if shape == AFFINE_OVER_X:
        return PlaneMap(x * c["alpha1"] + c["alpha0"], (y + c["beta0"]) / x)
    if shape == AFFINE_OVER_SUM:
        return PlaneMap(x * c["alpha1"] + c["alpha0"], RationalFunction.constant(XY, c["beta0"]) / (x + y))
    if shape == SKEW:
        return PlaneMap(x * c["alpha1"] + y + c["alpha0"], RationalFunction.constant(XY, c["beta0"]) / (y + c["gamma0"]))
    if shape == PRODUCT:
        return PlaneMap(x * c["alpha1"] + c["alpha0"], RationalFunction.constant(XY, c["beta0"]) / (y + c["gamma0"]))
    if shape == SWAP:
        return PlaneMap(y, RationalFunction.constant(XY, c["beta0"]) / (x + c["gamma0"]))
    raise ValueError(f"unknown shape {shape!r}")


@dataclass(frozen=True)
class NormalFormMap:
    map: PlaneMap
    conjugation: AffineConjugation
    source_case: str | None
    shape: str
    coefficients: dict

    @classmethod
    def from_shape(cls, shape: str, source_case: str | None = None, **coeffs) -> "NormalFormMap":
        coeffs = {k: as_gaussian(v) for k, v in coeffs.items()}
        return cls(shape_map(shape, coeffs), AffineConjugation.identity(), source_case, shape, coeffs)

    def coeff(self, name: str) -> GaussianRational:
        return self.coefficients[name]

    def original_map(self) -> PlaneMap:
        """φ ∘ g ∘ φ^-1, the map this form was conjugated from."""
        phi = self.conjugation
        return phi.as_map().compose(self.map).compose(phi.inverse_map())

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "source_case": self.source_case,
            "map": str(self.map),
            "conjugation": self.conjugation.to_dict(),
            "coefficients": {k: format_scalar(v) for k, v in self.coefficients.items()},
        }


def _conjugation_for(params: ParameterTuple, sub: str):
    a, b, g = params.alpha, params.beta, params.gamma
    if sub == "CD2-iii":
        phi = AffineConjugation(b[2] / g[1], -g[0] / g[1], ONE / b[2], b[1] / g[1])
        return AFFINE_OVER_X, phi
    if sub == "CD3-iii":
        ratio = b[1] / g[1]
        scale_y = g[1] / g[2]
        phi = AffineConjugation(ONE, -(g[0] + g[2] * ratio) / g[1], scale_y, ratio)
        return AFFINE_OVER_SUM, phi
    if sub.startswith("G1-i-"):
        return SKEW, AffineConjugation(a[2], ZERO, ONE, b[2] / g[2])
    if sub.startswith("G1-ii-"):
        return PRODUCT, AffineConjugation(ONE, ZERO, ONE, b[2] / g[2])
    if sub in ("G2-b1", "G2-b2"):
        d = b[1] / g[1]
        return SWAP, AffineConjugation(a[2], a[0] + a[2] * d, ONE, d)
    raise UnsupportedCaseError(f"no normal form is available for sub-case {sub}")


def _read_coefficients(shape: str, g: PlaneMap) -> dict:
    """Recover the shape's named coefficients from an explicit map."""
    x0 = (ZERO, ZERO)
    first, second = g.first, g.second
    out = {}
    if shape == SWAP:
        # second = b0/(g0 + x): 1/second = (g0 + x)/b0
        inv = second.inverse()
        slope = inv.diff(0).evaluate(x0)
        out["beta0"] = ONE / slope
        out["gamma0"] = inv.evaluate(x0) * out["beta0"]
        return out
    out["alpha1"] = first.diff(0).evaluate(x0)
    out["alpha0"] = first.evaluate(x0)
    if shape == AFFINE_OVER_X:
        out["beta0"] = (second * RationalFunction.gens(XY)[0]).evaluate(x0)
    elif shape == AFFINE_OVER_SUM:
        x, y = _xy()
        out["beta0"] = (second * (x + y)).evaluate(x0)
    else:
        inv = second.inverse()
        slope = inv.diff(1).evaluate(x0)
        out["beta0"] = ONE / slope
        out["gamma0"] = inv.evaluate(x0) * out["beta0"]
    return out


def normal_form(params: ParameterTuple, report: CaseReport | None = None) -> NormalFormMap:
    """Conjugate a zero-entropy member to its normal shape.

    The conjugated map is computed exactly and compared structurally with
    the shape built from the recovered coefficients; a mismatch raises
    :class:`InvariantViolation`.
    """
    require_birational(params)
    report = report or classify(params)
    shape, phi = _conjugation_for(params, report.subcase)
    f = build_family_map(params)
    g = phi.inverse_map().compose(f).compose(phi.as_map())
    coeffs = _read_coefficients(shape, g)
    if shape_map(shape, coeffs) != g:
        raise InvariantViolation(f"conjugated map {g} does not have the {shape} shape")
    return NormalFormMap(g, phi, report.subcase, shape, coeffs)


# -- catalog ------------------------------------------------------------------

def _iterate_sum(phi: MoebiusMap, var: int, count: int) -> RationalFunction:
    """v + φ(v) + ... + φ^(count-1)(v) for v the chosen coordinate."""
    v = RationalFunction.gens(XY)[var]
    total = v
    cur = v
    for _ in range(count - 1):
        cur = phi.compose_function(cur)
        total = total + cur
    return total


def _iterates(phi: MoebiusMap, var: int, count: int) -> list:
    v = RationalFunction.gens(XY)[var]
    out = [v]
    for _ in range(count - 1):
        out.append(phi.compose_function(out[-1]))
    return out


def _affine_fibrations(form: NormalFormMap) -> list:
    a0, a1 = form.coeff("alpha0"), form.coeff("alpha1")
    m = moebius_from_m(a0, a1)
    x, _ = _xy()
    specs = [FibrationSpec("V", Transform.along(m), x, note="V = x, moved by m(x) = a0 + a1 x")]
    p = root_of_unity_order(a1)
    if p is not None and p > 1:
        W = RationalFunction.constant(XY, ONE)
        for term in _iterates(m, 0, p):
            W = W * term
        specs.append(FibrationSpec("W", Transform.invariant(), W, note=f"x m(x) ... m^{p - 1}(x), m of period {p}"))
    return specs


def _v2_scale(a1, k, iterates, shifted_x) -> RationalFunction:
    total = shifted_x * (a1**k - 1)
    for j, hj in enumerate(iterates):
        total = total + hj * a1 ** (k - 1 - j)
    return total


def _skew_fibrations(form: NormalFormMap) -> list:
    from birmap.moebius import geometric_sum_vanishing

    a0, a1 = form.coeff("alpha0"), form.coeff("alpha1")
    g0, b0 = form.coeff("gamma0"), form.coeff("beta0")
    h = moebius_from_h(g0, b0)
    x, y = _xy()
    specs = [FibrationSpec("V1", Transform.along(h), y, note="V1 = y, moved by h")]
    per = periodicity_exact(h)
    if not per.periodic:
        return specs  # the invariant fibration is unique here
    k = per.period
    hs = _iterates(h, 1, k)
    H1 = hs[0]
    for t in hs[1:]:
        H1 = H1 + t
    specs.append(FibrationSpec("H1", Transform.invariant(), H1, note=f"y + h(y) + ... + h^{k - 1}(y), k = {k}"))
    n = geometric_sum_vanishing(a1, k)
    w = a1**k
    if a1 != ONE:
        shifted = x - a0 / (ONE - a1)
    if n is not None or w != ONE:
        V2 = _v2_scale(a1, k, hs, shifted)
        specs.append(FibrationSpec("V2", Transform.scale(a1), V2, note="scale-type second fibration"))
        if n is not None:
            P = (n + 1) * k
            specs.append(FibrationSpec.power("H2", Transform.invariant(), V2, P, note=f"V2^{P}, n = {n}"))
        return specs
    num = shifted * k if a1 != ONE else x * k
    den = RationalFunction.constant(XY, a0 * k) if a1 == ONE else RationalFunction.constant(XY, ZERO)
    for j, hj in enumerate(hs):
        c = a1 ** (k - 1 - j)
        if j <= k - 2:
            num = num + hj * ((k - 1 - j) * c)
        den = den + hj * c
    label_note = "translation-type second fibration" + (" (a1 = 1)" if a1 == ONE else "")
    specs.append(FibrationSpec("V2", Transform.translate(), num / den, note=label_note))
    return specs


def _product_fibrations(form: NormalFormMap) -> list:
    a0, a1 = form.coeff("alpha0"), form.coeff("alpha1")
    g0, b0 = form.coeff("gamma0"), form.coeff("beta0")
    m = moebius_from_m(a0, a1)
    h = moebius_from_h(g0, b0)
    x, y = _xy()
    specs = [
        FibrationSpec("V1", Transform.along(m), x, note="V1 = x, moved by m"),
        FibrationSpec("V2", Transform.along(h), y, note="V2 = y, moved by h"),
    ]
    per = periodicity_exact(h)
    if per.periodic:
        k = per.period
        specs.append(FibrationSpec("H1", Transform.invariant(), _iterate_sum(h, 1, k), note=f"k = {k}"))
    mper = periodicity_exact(m)
    if mper.periodic:
        p = mper.period
        H2 = _iterate_sum(m, 0, p)
        collapsed = H2.is_constant()
        note = f"p = {p}" + ("; sum of a full m-orbit is constant" if collapsed else "")
        specs.append(FibrationSpec("H2", Transform.invariant(), H2, expected_degenerate=collapsed, note=note))
    return specs


def _split_numeric(p, m, sign):
    """Evaluator for H1 (sign = +1) or H2 (sign = -1) with numeric p, m."""

    def fn(x, y):
        sm = sign * m
        num = m * m * p * p + sm * p * x + p * (m * m - sm + 1) * y + x * y
        return num, (x + p) * (y + p)

    return fn


def _split_exact(p, m, sign) -> RationalFunction:
    x, y = _xy()
    sm = m * sign
    num = x * y + x * (sm * p) + y * (p * (m * m - sm + 1)) + m * m * p * p
    return num / ((x + p) * (y + p))


def _power_numeric(fn, e):
    def out(x, y):
        n, d = fn(x, y)
        return n**e, d**e

    return out


def _swap_fibrations(form: NormalFormMap) -> list:
    g0, b0 = form.coeff("gamma0"), form.coeff("beta0")
    x, y = _xy()
    if not g0 * g0 + 4 * b0:
        c = g0
        den = (x * 2 + c) * (y * 2 + c)
        K1 = (x * y * 4 - x * (2 * c) + y * (6 * c) + c * c) / den
        K2 = ((x + y + c) * (2 * c)) / den
        return [
            FibrationSpec("K1", Transform.scale(-1), K1),
            FibrationSpec("K2", Transform.translate(), K2),
            FibrationSpec.power("W", Transform.invariant(), K1, 2, note="K1^2"),
        ]
    rp = root_pair_data(g0, b0)
    h = moebius_from_h(g0, b0)
    per = periodicity_exact(h)
    specs = []
    if rp.exact:
        p, m = rp.p, rp.m
        H1 = _split_exact(p, m, 1)
        H2 = _split_exact(p, m, -1)
        specs += [
            FibrationSpec("H1", Transform.scale(m), H1, note=f"p = {format_scalar(p)}, m = {format_scalar(m)}"),
            FibrationSpec("H2", Transform.scale(-m), H2),
        ]
        if per.periodic:
            e = 2 * per.period
            specs += [
                FibrationSpec.power(f"H1^{e}", Transform.invariant(), H1, e),
                FibrationSpec.power(f"H2^{e}", Transform.invariant(), H2, e),
            ]
        return specs
    import mpmath

    pn, _, mn = rp.numeric
    with mpmath.workprec(NUMERIC_PRECISION):
        neg = -mn
    note = f"m is not in Q(i) (roots of {rp.min_poly}); evaluated numerically"
    f1, f2 = _split_numeric(pn, mn, 1), _split_numeric(pn, mn, -1)
    specs += [
        FibrationSpec("H1", Transform.scale_numeric(mn), numeric=f1, note=note),
        FibrationSpec("H2", Transform.scale_numeric(neg), numeric=f2, note=note),
    ]
    if per.periodic:
        e = 2 * per.period
        specs += [
            FibrationSpec(f"H1^{e}", Transform.invariant(), numeric=_power_numeric(f1, e), note=note),
            FibrationSpec(f"H2^{e}", Transform.invariant(), numeric=_power_numeric(f2, e), note=note),
        ]
    return specs


def builtin_fibrations(form: NormalFormMap) -> list:
    """Every fibration and first integral known for the form's shape."""
    if form.shape in (AFFINE_OVER_X, AFFINE_OVER_SUM):
        return _affine_fibrations(form)
    if form.shape == SKEW:
        return _skew_fibrations(form)
    if form.shape == PRODUCT:
        return _product_fibrations(form)
    if form.shape == SWAP:
        return _swap_fibrations(form)
    raise UnsupportedCaseError(f"no catalog for shape {form.shape!r}")


# -- verification -------------------------------------------------------------

def _random_gaussian(rng: random.Random) -> GaussianRational:
    re = Fraction(rng.randint(-60, 60), rng.randint(1, 17))
    im = Fraction(rng.randint(-60, 60), rng.randint(1, 17))
    return GaussianRational(re, im)


def _numeric_check(f: PlaneMap, spec: FibrationSpec, seed: int, points: int) -> FibrationVerdict:
    import mpmath

    rng = random.Random(seed)
    guard = mpmath.mpf(POLE_GUARD.numerator) / POLE_GUARD.denominator
    tol = mpmath.mpf(NUMERIC_TOLERANCE.numerator) / NUMERIC_TOLERANCE.denominator
    worst = mpmath.mpf(0)
    used = tries = 0
    with mpmath.workprec(NUMERIC_PRECISION):
        while used < points:
            tries += 1
            if tries > 50 * points:
                return FibrationVerdict(spec.label, str(spec.transform), "fail", "numeric",
                                        f"could not find {points} points away from poles", spec.expected_degenerate)
            pt = (_random_gaussian(rng), _random_gaussian(rng))
            fd = [c.denominator.evaluate(pt) for c in f.components]
            if any(abs(_mpc(v)) < guard for v in fd):
                continue
            img = f(pt)
            zx, zy = _mpc(pt[0]), _mpc(pt[1])
            wx, wy = _mpc(img[0]), _mpc(img[1])
            n0, d0 = _eval_spec(spec, zx, zy)
            n1, d1 = _eval_spec(spec, wx, wy)
            if abs(d0) < guard or abs(d1) < guard:
                continue
            lhs = n1 / d1
            rhs = spec.transform.expected_numeric(n0 / d0)
            if spec.transform.kind == MOEBIUS and abs(_mpc(spec.transform.moebius.c) * (n0 / d0) + _mpc(spec.transform.moebius.d)) < guard:
                continue
            err = abs(lhs - rhs) / max(1, abs(rhs))
            worst = max(worst, err)
            used += 1
        ok = worst <= tol
    detail = f"{points} points, max relative error {mpmath.nstr(worst, 5)}"
    return FibrationVerdict(spec.label, str(spec.transform), "pass" if ok else "fail", "numeric", detail,
                            spec.expected_degenerate)


def _eval_spec(spec: FibrationSpec, x, y):
    if spec.numeric is not None:
        return spec.numeric(x, y)
    fn = spec.function
    return _eval_poly(fn.numerator, x, y), _eval_poly(fn.denominator, x, y)


def _eval_poly(p, x, y):
    total = 0
    for (i, j), c in p.terms.items():
        total += _mpc(c) * x**i * y**j
    return total


def verify_fibration(f: PlaneMap, spec: FibrationSpec, *, seed: int = 0, points: int = NUMERIC_POINTS) -> FibrationVerdict:
    """Check H∘f against the transform's right-hand side.

    Exact specs are checked by structural equality of reduced rational
    functions.  Specs without exact coefficients are sampled at ``points``
    random Gaussian-rational points at 128-bit precision.
    """
    if spec.degenerate:
        return FibrationVerdict(spec.label, str(spec.transform), "degenerate", "exact",
                                f"function is constant ({spec.function})", spec.expected_degenerate)
    if not spec.exact:
        return _numeric_check(f, spec, seed, points)
    H = spec.function
    try:
        lhs = spec.pullback_by(f)
    except DomainError as exc:
        return FibrationVerdict(spec.label, str(spec.transform), "fail", "exact",
                                f"H∘f is undefined: {exc}", spec.expected_degenerate)
    rhs = spec.transform.expected(H)
    ok = lhs == rhs
    detail = "" if ok else f"H∘f = {lhs}, expected {rhs}"
    return FibrationVerdict(spec.label, str(spec.transform), "pass" if ok else "fail", "exact", detail,
                            spec.expected_degenerate)


def verify_catalog(form: NormalFormMap, *, seed: int = 0, on_original: bool = False) -> list:
    """Verify every built-in fibration, on the normal form or pulled back to the original map."""
    specs = builtin_fibrations(form)
    if on_original:
        f = form.original_map()
        specs = [pull_back_spec(s, form) for s in specs]
    else:
        f = form.map
    return [verify_fibration(f, s, seed=seed) for s in specs]


def pull_back_spec(spec: FibrationSpec, form: NormalFormMap) -> FibrationSpec:
    """Move a fibration of the normal form to the original coordinates (H ∘ φ^-1)."""
    phi = form.conjugation
    if phi.is_identity():
        return spec
    inv = phi.inverse_map()
    function = base = None
    numeric = spec.numeric
    if spec.base is not None:
        base = spec.base.compose([inv.first, inv.second])
        function = base**spec.exponent
    elif spec.function is not None:
        function = spec.function.compose([inv.first, inv.second])
    if numeric is not None:
        a, b, c, d = (_mpc(v) for v in (phi.a, phi.b, phi.c, phi.d))
        inner = spec.numeric

        def numeric(x, y):
            return inner((x - b) / a, (y - d) / c)

    return FibrationSpec(spec.label, spec.transform, function, numeric, spec.expected_degenerate,
                         (spec.note + "; " if spec.note else "") + "pulled back through the conjugation",
                         base, spec.exponent)


# -- transversality -----------------------------------------------------------

@dataclass(frozen=True)
class TransversalityVerdict:
    transverse: bool
    determinant: RationalFunction | None
    numeric_value: Any = None

    def to_dict(self) -> dict:
        return {
            "transverse": self.transverse,
            "determinant": str(self.determinant) if self.determinant is not None else None,
        }


def transversality(h1: FibrationSpec, h2: FibrationSpec, *, seed: int = 0) -> TransversalityVerdict:
    """Jacobian determinant of (H1, H2); transverse iff it is not identically zero."""
    if h1.function is not None and h2.function is not None:
        a, b = h1.function, h2.function
        det = a.diff(0) * b.diff(1) - a.diff(1) * b.diff(0)
        return TransversalityVerdict(not det.is_zero(), det)
    import mpmath

    rng = random.Random(seed)
    with mpmath.workprec(NUMERIC_PRECISION):
        pt = [_mpc(_random_gaussian(rng)) for _ in range(2)]

        def value(spec, x, y):
            n, d = _eval_spec(spec, x, y)
            return n / d

        J = [[mpmath.diff(lambda t: value(s, t, pt[1]), pt[0]), mpmath.diff(lambda t: value(s, pt[0], t), pt[1])]
             for s in (h1, h2)]
        det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    return TransversalityVerdict(abs(det) > mpmath.mpf(10) ** -20, None, det)


def split_jacobian(p, m) -> RationalFunction:
    """-2 p^2 m (m^2 - 1) / ((p + x)^2 (p + y)^2)."""
    p, m = as_gaussian(p), as_gaussian(m)
    x, y = _xy()
    return RationalFunction.constant(XY, -2 * p * p * m * (m * m - 1)) / ((x + p) ** 2 * (y + p) ** 2)


def double_root_jacobian(c) -> RationalFunction:
    """16 c^2 / ((2y + c)^2 (2x + c)^2)."""
    c = as_gaussian(c)
    x, y = _xy()
    return RationalFunction.constant(XY, 16 * c * c) / ((y * 2 + c) ** 2 * (x * 2 + c) ** 2)


# -- periodicity --------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicityReport:
    """Minimal N <= bound with f^N = id, or None.

    ``exhaustive`` is true when every N <= bound has been ruled out (or
    the period found); ``checked_up_to`` is the last iterate computed.
    """

    period: int | None
    bound: int
    checked_up_to: int
    exhaustive: bool
    reason: str

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "bound": self.bound,
            "checked_up_to": self.checked_up_to,
            "exhaustive": self.exhaustive,
            "reason": self.reason,
        }


# a prime = 1 mod 4, so that i exists in F_p
_SCREEN_PRIME = (1 << 61) + 21


def _sqrt_minus_one(q: int) -> int:
    for g in range(2, 200):
        r = pow(g, (q - 1) // 4, q)
        if r * r % q == q - 1:
            return r
    raise RuntimeError("no square root of -1 found")


class _Reduction:
    """Reduce Q(i) coefficients modulo the screening prime."""

    def __init__(self, q: int = _SCREEN_PRIME):
        self.q = q
        self.i = _sqrt_minus_one(q)

    def scalar(self, c: GaussianRational) -> int:
        q = self.q
        out = 0
        for part, unit in ((c.re, 1), (c.im, self.i)):
            if part:
                den = part.denominator % q
                if not den:
                    raise ZeroDivisionError("coefficient denominator vanishes mod q")
                out += part.numerator * pow(den, -1, q) * unit
        return out % q

    def compile(self, F: ProjectiveMap):
        return [[(e, self.scalar(c)) for e, c in comp.terms.items()] for comp in F.components]

    def apply(self, comps, v):
        q = self.q
        out = []
        for terms in comps:
            total = 0
            for e, c in terms:
                t = c
                for vi, k in zip(v, e):
                    if k:
                        t = t * pow(vi, k, q) % q
                total += t
            out.append(total % q)
        return out


def _proportional(u, v, q) -> bool:
    return all((u[i] * v[j] - u[j] * v[i]) % q == 0 for i in range(3) for j in range(i + 1, 3))


def _screen_periods(F: ProjectiveMap, bound: int, seed: int, samples: int = 3) -> set:
    """Periods N <= bound not excluded by orbits of random points mod a prime.

    If f^N = id then any orbit whose N steps are all defined returns to its
    start, so an orbit that does not return excludes N for certain.
    """
    red = _Reduction()
    comps = red.compile(F)
    rng = random.Random(seed)
    alive = set(range(1, bound + 1))
    done = attempts = 0
    while done < samples and alive and attempts < 50:
        attempts += 1
        p = [rng.randrange(1, red.q) for _ in range(3)]
        v = p
        returned = set()
        ok = True
        for n in range(1, bound + 1):
            v = red.apply(comps, v)
            if not any(v):
                ok = False
                break
            if _proportional(v, p, red.q):
                returned.add(n)
        if ok:
            alive &= returned
            done += 1
    return alive


def detect_periodicity(
    f, bound: int = DEFAULT_PERIOD_BOUND, term_budget: int = DEFAULT_TERM_BUDGET, seed: int = 0
) -> PeriodicityReport:
    """Least N <= ``bound`` with f^N the identity, or None.

    Candidate periods are first screened with point orbits modulo a prime
    (a rigorous exclusion test).  Surviving candidates are then confirmed by
    exact iteration, which also stops once the degree bound
    d_n <= d_1^(bound - n), implied by f^-n = f^(N - n), fails.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if isinstance(f, ParameterTuple):
        require_birational(f)
        f = build_family_map(f)
    F = f if isinstance(f, ProjectiveMap) else homogenize(f)
    try:
        alive = _screen_periods(F, bound, seed)
    except ZeroDivisionError:
        alive = set(range(1, bound + 1))
    if not alive:
        return PeriodicityReport(None, bound, bound, True, f"sampled orbits exclude every period up to {bound}")
    top = max(alive)
    d1 = F.degree
    last = 0
    for info in iterate_reduced(F, top, term_budget):
        last = info.n
        if info.n in alive and info.is_identity:
            return PeriodicityReport(info.n, bound, info.n, True, f"f^{info.n} is the identity")
        remaining = bound - info.n
        if d1 > 1 and remaining and info.degree > d1**remaining:
            return PeriodicityReport(None, bound, info.n, True,
                                     f"d_{info.n} = {info.degree} exceeds {d1}^{remaining}; no period up to {bound}")
    if last < top:
        return PeriodicityReport(None, bound, last, False, f"term budget reached after {last} iterates")
    return PeriodicityReport(None, bound, bound, True, f"no iterate up to {bound} is the identity")


# -- linearizing conjugacies ---------------------------------------------------

def linearizing_pair(form: NormalFormMap):
    """(Φ, L) with Φ∘f = L∘Φ for the swap shape: L = (m x, -m y) or (-x, y + 1).

    Only available when the fibrations are exact.
    """
    if form.shape != SWAP:
        raise UnsupportedCaseError("linearizing pair is only defined for the swap shape")
    specs = {s.label: s for s in builtin_fibrations(form)}
    x, y = _xy()
    if "K1" in specs:
        Phi = PlaneMap(specs["K1"].function, specs["K2"].function)
        return Phi, PlaneMap(-x, y + 1)
    H1, H2 = specs["H1"], specs["H2"]
    if not (H1.exact and H2.exact):
        raise UnsupportedCaseError("m is not in Q(i); no exact linearizing pair")
    m = H1.transform.factor
    return PlaneMap(H1.function, H2.function), PlaneMap(x * m, y * (-m))


__all__.append("linearizing_pair")
