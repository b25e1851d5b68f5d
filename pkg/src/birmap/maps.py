"""The family f(x,y) = (a0+a1x+a2y, (b0+b1x+b2y)/(g0+g1x+g2y)) and its projective model.

Affine maps are pairs of reduced rational functions in ``(x, y)``; projective
maps are reduced triples of homogeneous polynomials in ``(x0, x1, x2)`` with the
affine chart ``x0 = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from birmap.errors import (
    DegenerateCompositionError,
    DomainError,
    InvariantViolation,
    NotBirationalError,
)
from birmap.exact import _flint
from birmap.exact.gaussian import ONE, GaussianRational, as_gaussian, format_scalar
from birmap.exact.gcd import poly_gcd_many, poly_lcm, use_flint
from birmap.exact.poly import PROJ, XY, MultiPoly
from birmap.exact.ratfunc import RationalFunction, reduce_fraction

__all__ = [
    "ParameterTuple",
    "PlaneMap",
    "ProjectiveMap",
    "BirationalityReport",
    "JacobianNumerators",
    "bracket",
    "build_family_map",
    "birationality_check",
    "invert_family",
    "jacobian_numerators",
    "homogenize",
    "compose_reduce",
    "family_projective",
    "require_birational",
    "NON_DEGENERATE",
    "DEGENERATE_ALPHA_GAMMA",
    "DEGENERATE_BETA_GAMMA",
    "DEGENERATE_BOTH",
]

NON_DEGENERATE = "NonDegenerate"
DEGENERATE_ALPHA_GAMMA = "DegenerateAlphaGamma"
DEGENERATE_BETA_GAMMA = "DegenerateBetaGamma"
DEGENERATE_BOTH = "DegenerateBoth"

CLAUSE_INDEPENDENT = "beta and gamma rows linearly independent"
CLAUSE_AB_AG = "((ab)12, (ag)12) != (0, 0)"
CLAUSE_AG_BG = "((ag)12, (bg)12) != (0, 0)"
CLAUSE_AB_BG = "((ab)12, (bg)12) != (0, 0) or (b1, b2) = (0, 0)"


def bracket(u: Sequence, v: Sequence, i: int, j: int) -> GaussianRational:
    """(uv)_ij = u_i v_j - u_j v_i."""
    return u[i] * v[j] - u[j] * v[i]


def _triple(values, name):
    vals = tuple(as_gaussian(v) for v in values)
    if len(vals) != 3:
        raise InvariantViolation(f"{name} must have exactly three entries, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class ParameterTuple:
    """The nine coefficients alpha, beta, gamma (each a triple indexed 0, 1, 2)."""

    alpha: tuple
    beta: tuple
    gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", _triple(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _triple(self.beta, "beta"))
        object.__setattr__(self, "gamma", _triple(self.gamma, "gamma"))
        if not self.gamma[1] and not self.gamma[2]:
            raise InvariantViolation("(gamma1, gamma2) must not be (0, 0)")

    @classmethod
    def from_strings(cls, alpha, beta, gamma) -> "ParameterTuple":
        return cls(tuple(alpha), tuple(beta), tuple(gamma))

    def row(self, name: str):
        return {"a": self.alpha, "b": self.beta, "g": self.gamma}[name[0]]

    def br(self, pair: str, i: int, j: int) -> GaussianRational:
        """Bracket by short name, e.g. ``p.br("bg", 1, 2)`` is (beta gamma)_12."""
        return bracket(self.row(pair[0]), self.row(pair[1]), i, j)

    @property
    def ab12(self):
        return self.br("ab", 1, 2)

    @property
    def ag12(self):
        return self.br("ag", 1, 2)

    @property
    def bg12(self):
        return self.br("bg", 1, 2)

    def det(self) -> GaussianRational:
        """Determinant of the 3x3 matrix with rows alpha, beta, gamma."""
        g = self.gamma
        return g[0] * self.br("ab", 1, 2) - g[1] * self.br("ab", 0, 2) + g[2] * self.br("ab", 0, 1)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.alpha + self.beta + self.gamma)

    def to_dict(self) -> dict:
        return {k: [format_scalar(c) for c in getattr(self, k)] for k in ("alpha", "beta", "gamma")}

    def __str__(self):
        d = self.to_dict()
        return "alpha=({}) beta=({}) gamma=({})".format(*(", ".join(d[k]) for k in ("alpha", "beta", "gamma")))


# -- affine maps --------------------------------------------------------------

class PlaneMap:
    """(first(x,y), second(x,y)) with reduced rational components."""

    __slots__ = ("first", "second")

    def __init__(self, first, second):
        self.first = _as_rf(first)
        self.second = _as_rf(second)

    @classmethod
    def identity(cls) -> "PlaneMap":
        x, y = RationalFunction.gens(XY)
        return cls(x, y)

    @property
    def components(self):
        return (self.first, self.second)

    def compose(self, inner: "PlaneMap") -> "PlaneMap":
        """``self ∘ inner``."""
        subs = [inner.first, inner.second]
        return PlaneMap(self.first.compose(subs), self.second.compose(subs))

    def pullback(self, h: RationalFunction) -> RationalFunction:
        """``h ∘ self``."""
        return h.compose([self.first, self.second])

    def iterate(self, n: int) -> "PlaneMap":
        if n < 0:
            raise DomainError("negative iterate of a plane map")
        out = PlaneMap.identity()
        for _ in range(n):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return self == PlaneMap.identity()

    def __call__(self, point):
        return (self.first.evaluate(point), self.second.evaluate(point))

    def jacobian_determinant(self) -> RationalFunction:
        a, b = self.first, self.second
        return a.diff(0) * b.diff(1) - a.diff(1) * b.diff(0)

    def is_real(self) -> bool:
        return self.first.is_real() and self.second.is_real()

    def __eq__(self, other):
        if not isinstance(other, PlaneMap):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def __hash__(self):
        return hash((self.first, self.second))

    def __str__(self):
        return f"({self.first}, {self.second})"

    def __repr__(self):
        return f"PlaneMap{self}"


def _as_rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        if v.variables != XY:
            raise DomainError(f"plane map components must be in {XY}, got {v.variables}")
        return v
    if isinstance(v, MultiPoly):
        return RationalFunction.from_poly(v)
    if isinstance(v, str):
        from birmap.exact.parse import parse_expr

        return parse_expr(v, XY)
    return RationalFunction.constant(XY, v)


# -- projective maps ----------------------------------------------------------

class ProjectiveMap:
    """Reduced triple of homogeneous polynomials of a common degree on P^2.

    Components are divided by their gcd and scaled so that the first nonzero
    component has leading coefficient 1; equal maps therefore compare equal.
    """

    __slots__ = ("components", "degree")

    def __init__(self, components: Sequence[MultiPoly], *, reduce: bool = True):
        comps = tuple(components)
        if len(comps) != 3:
            raise InvariantViolation("a projective map of P^2 needs three components")
        if any(c.variables != PROJ for c in comps):
            raise InvariantViolation(f"components must be polynomials in {PROJ}")
        if not any(comps):
            raise InvariantViolation("all components are identically zero")
        degs = {c.total_degree() for c in comps if c}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise InvariantViolation("components must be homogeneous of one common degree")
        if reduce:
            g = poly_gcd_many(comps)
            if not g.is_constant():
                comps = tuple(c.divexact(g) if c else c for c in comps)
        lead = next(c for c in comps if c).leading_coefficient()
        if lead != ONE:
            inv = lead.inverse()
            comps = tuple(c.scale(inv) for c in comps)
        self.components = comps
        self.degree = next(c for c in comps if c).total_degree()

    @classmethod
    def identity(cls) -> "ProjectiveMap":
        return cls(MultiPoly.gens(PROJ), reduce=False)

    def is_identity(self) -> bool:
        return self.degree == 1 and self.components == MultiPoly.gens(PROJ)

    def term_count(self) -> int:
        return sum(len(c) for c in self.components)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.components)

    def to_plane(self) -> PlaneMap:
        """Restriction to the chart x0 = 1."""
        f0, f1, f2 = (c.dehomogenize(XY) for c in self.components)
        if not f0:
            raise DomainError("map sends the affine chart into the line x0 = 0")
        return PlaneMap(reduce_fraction(f1, f0), reduce_fraction(f2, f0))

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        return "[" + " : ".join(str(c) for c in self.components) + "]"

    def __repr__(self):
        return f"ProjectiveMap(degree={self.degree}, {self})"


def homogenize(m: PlaneMap) -> ProjectiveMap:
    """Reduced homogeneous triple [F0 : F1 : F2] with F1/F0, F2/F0 = m on x0 = 1."""
    n1, d1 = m.first.numerator, m.first.denominator
    n2, d2 = m.second.numerator, m.second.denominator
    common = poly_lcm(d1, d2)
    affine = [common, n1 * common.divexact(d1), n2 * common.divexact(d2)]
    deg = max(p.total_degree() for p in affine)
    return ProjectiveMap([p.homogenize(PROJ, deg) for p in affine])


def _compose_components(outer: ProjectiveMap, inner: ProjectiveMap):
    if use_flint(*outer.components, *inner.components):
        G = [_flint.to_flint(c) for c in inner.components]
        comps = [_flint.to_flint(c).compose(*G) for c in outer.components]
        nonzero = [c for c in comps if c != 0]
        if not nonzero:
            raise DegenerateCompositionError("all components vanish identically after substitution")
        g = nonzero[0]
        for c in nonzero[1:]:
            g = g.gcd(c)
        if g.total_degree() > 0:
            comps = [c / g for c in comps]
        return [_flint.from_flint(c, PROJ) for c in comps]
    comps = [c.compose(inner.components) for c in outer.components]
    if not any(comps):
        raise DegenerateCompositionError("all components vanish identically after substitution")
    return comps


def compose_reduce(outer: ProjectiveMap, inner: ProjectiveMap) -> ProjectiveMap:
    """``outer ∘ inner`` with the common factor of the components removed.

    >>> F = ProjectiveMap([MultiPoly.gens(PROJ)[0] * MultiPoly.gens(PROJ)[2],
    ...                    MultiPoly.gens(PROJ)[2] ** 2,
    ...                    MultiPoly.gens(PROJ)[0] * MultiPoly.gens(PROJ)[1]])
    >>> compose_reduce(F, F).degree
    3
    """
    return ProjectiveMap(_compose_components(outer, inner))


# -- the family ---------------------------------------------------------------

def _linear(c, variables=XY) -> MultiPoly:
    one, *gens = (MultiPoly.one(variables),) + MultiPoly.gens(variables)
    return one.scale(c[0]) + gens[0].scale(c[1]) + gens[1].scale(c[2])


def build_family_map(params: ParameterTuple) -> PlaneMap:
    """f(x,y) = (a0+a1x+a2y, (b0+b1x+b2y)/(g0+g1x+g2y)).

    >>> str(build_family_map(ParameterTuple((0, 1, 1), (1, 0, 0), (0, 1, 0))))
    '(x + y, 1/x)'
    """
    if not isinstance(params, ParameterTuple):
        raise InvariantViolation("expected a ParameterTuple")
    first = RationalFunction.from_poly(_linear(params.alpha))
    second = reduce_fraction(_linear(params.beta), _linear(params.gamma))
    return PlaneMap(first, second)


@dataclass(frozen=True)
class BirationalityReport:
    is_birational: bool
    violated_conditions: tuple
    degeneracy: str

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy != NON_DEGENERATE

    def to_dict(self) -> dict:
        return {
            "is_birational": self.is_birational,
            "violated_conditions": list(self.violated_conditions),
            "degeneracy": self.degeneracy,
        }


def _independent(u, v) -> bool:
    return any(bracket(u, v, i, j) for i, j in ((0, 1), (0, 2), (1, 2)))


def birationality_check(params: ParameterTuple) -> BirationalityReport:
    """Evaluate the four birationality clauses and the degeneracy tag."""
    ab12, ag12, bg12 = params.ab12, params.ag12, params.bg12
    violated = []
    if not _independent(params.beta, params.gamma):
        violated.append(CLAUSE_INDEPENDENT)
    if not ab12 and not ag12:
        violated.append(CLAUSE_AB_AG)
    if not ag12 and not bg12:
        violated.append(CLAUSE_AG_BG)
    if not ab12 and not bg12 and (params.beta[1] or params.beta[2]):
        violated.append(CLAUSE_AB_BG)
    if not ag12 and not bg12:
        tag = DEGENERATE_BOTH
    elif not ag12:
        tag = DEGENERATE_ALPHA_GAMMA
    elif not bg12:
        tag = DEGENERATE_BETA_GAMMA
    else:
        tag = NON_DEGENERATE
    return BirationalityReport(not violated, tuple(violated), tag)


def require_birational(params: ParameterTuple) -> BirationalityReport:
    rep = birationality_check(params)
    if not rep.is_birational:
        raise NotBirationalError(rep.violated_conditions)
    return rep


def invert_family(params: ParameterTuple) -> PlaneMap:
    """Closed-form inverse: solve the linear system in (x, y) by Cramer's rule.

    With (X, Y) = f(x, y) the preimage satisfies
    a1 x + a2 y = X - a0 and (g1 Y - b1) x + (g2 Y - b2) y = b0 - g0 Y,
    whose determinant is (ag)12 Y - (ab)12.
    """
    require_birational(params)
    a, b, g = params.alpha, params.beta, params.gamma
    one = MultiPoly.one(XY)
    X, Y = MultiPoly.gens(XY)
    det = Y.scale(params.ag12) - one.scale(params.ab12)
    rhs1 = X - one.scale(a[0])
    rhs2 = one.scale(b[0]) - Y.scale(g[0])
    c11, c12 = a[1], a[2]
    c21 = Y.scale(g[1]) - one.scale(b[1])
    c22 = Y.scale(g[2]) - one.scale(b[2])
    num_x = rhs1 * c22 - rhs2.scale(c12)
    num_y = rhs2.scale(c11) - c21 * rhs1
    return PlaneMap(reduce_fraction(num_x, det), reduce_fraction(num_y, det))


class JacobianNumerators(NamedTuple):
    """Numerators N with det Df = -N/(g0+g1x+g2y)^2 and det D(f^-1) = M/((ag)12 y - (ab)12)^2."""

    forward: MultiPoly
    inverse: MultiPoly

    @property
    def degenerate(self) -> bool:
        return not self.forward and not self.inverse


def jacobian_numerators(params: ParameterTuple) -> JacobianNumerators:
    """Closed-form Jacobian numerators of f and of its inverse.

    The inverse numerator is a0(bg)12 - a1(bg)02 + a2(bg)01 - (bg)12 x; it
    depends on the first coordinate of the inverse's source, not the second.
    """
    a = params.alpha
    bg01, bg02, bg12 = params.br("bg", 0, 1), params.br("bg", 0, 2), params.bg12
    one = MultiPoly.one(XY)
    x, y = MultiPoly.gens(XY)
    forward = one.scale(a[1] * bg02 - a[2] * bg01) + x.scale(a[1] * bg12) + y.scale(a[2] * bg12)
    inverse = one.scale(a[0] * bg12 - a[1] * bg02 + a[2] * bg01) - x.scale(bg12)
    return JacobianNumerators(forward, inverse)


def family_projective(params: ParameterTuple) -> ProjectiveMap:
    return homogenize(build_family_map(params))
