import random

import pytest
import sympy as sp

from birmap.errors import DegenerateCompositionError, InvariantViolation, NotBirationalError
from birmap.exact import PROJ, XY, MultiPoly, RationalFunction
from birmap.maps import (
    CLAUSE_INDEPENDENT,
    DEGENERATE_ALPHA_GAMMA,
    DEGENERATE_BETA_GAMMA,
    NON_DEGENERATE,
    ParameterTuple,
    PlaneMap,
    ProjectiveMap,
    birationality_check,
    build_family_map,
    compose_reduce,
    homogenize,
    invert_family,
    jacobian_numerators,
)

from corpus import random_params
from oracles import forward_jacobian_ok, inverse_jacobian_ok, sympy_scalar

x0, x1, x2 = MultiPoly.gens(PROJ)
X, Y = RationalFunction.gens(XY)


def pm(a, b, g):
    return ParameterTuple(a, b, g)


# -- construction -------------------------------------------------------------

@pytest.mark.parametrize(
    "params, expected",
    [
        (pm((0, 0, 1), (0, 1, 0), (0, 0, 1)), PlaneMap(Y, X / Y)),
        (pm((0, 1, 0), (0, 0, 1), (0, 1, 0)), PlaneMap(X, Y / X)),
        (pm((0, 1, 1), (1, 0, 0), (0, 1, 0)), PlaneMap(X + Y, 1 / X)),
    ],
)
def test_build_family_map(params, expected):
    assert build_family_map(params) == expected


def test_gamma_invariant():
    with pytest.raises(InvariantViolation):
        pm((0, 1, 0), (1, 0, 0), (1, 0, 0))


def test_parameter_brackets():
    p = pm((0, 1, 1), (1, 0, 0), (0, 1, 0))
    assert p.ag12 == -1 and p.bg12 == 0 and p.ab12 == 0


# -- birationality ------------------------------------------------------------

def test_dependent_rows_not_birational():
    rep = birationality_check(pm((0, 1, 1), (0, 1, 0), (0, 2, 0)))
    assert not rep.is_birational
    assert CLAUSE_INDEPENDENT in rep.violated_conditions


def test_degeneracy_tags():
    r1 = birationality_check(pm((0, 0, 1), (0, 1, 0), (0, 0, 1)))
    assert r1.is_birational and r1.degeneracy == DEGENERATE_ALPHA_GAMMA and r1.is_degenerate
    r2 = birationality_check(pm((0, 1, 1), (1, 0, 0), (0, 1, 0)))
    assert r2.is_birational and r2.degeneracy == DEGENERATE_BETA_GAMMA
    r3 = birationality_check(pm((1, 2, 3), (1, 0, 1), (0, 1, 1)))
    assert r3.degeneracy == NON_DEGENERATE and not r3.is_degenerate


def _generic_fibre_size(p, rng):
    # oracle independent of the clause list: solve f(Q) = f(P) with sympy at
    # a random point P; birational iff the fibre is exactly {P}
    x, y = sp.symbols("x y")
    a, b, g = ([sympy_scalar(c) for c in row] for row in (p.alpha, p.beta, p.gamma))
    num = b[0] + b[1] * x + b[2] * y
    den = g[0] + g[1] * x + g[2] * y
    if sp.expand(num * g[1] - den * b[1]) == 0 and sp.expand(num * g[2] - den * b[2]) == 0:
        return 0  # second component constant
    for _ in range(10):
        P = {x: sp.Rational(rng.randint(-50, 50), rng.randint(1, 9)), y: sp.Rational(rng.randint(-50, 50), rng.randint(1, 9))}
        if den.subs(P) != 0:
            break
    c1 = (a[0] + a[1] * x + a[2] * y).subs(P)
    c2 = (num / den).subs(P)
    sols = sp.solve([a[0] + a[1] * x + a[2] * y - c1, sp.expand(num - c2 * den)], [x, y], dict=True)
    sols = [s for s in sols if den.subs(s) != 0]
    if any(len(s) < 2 for s in sols):
        return float("inf")
    return len(sols)


def test_birationality_matches_fibre_oracle():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for k in range(300):
        p = random_params(rng, degenerate=(None, "ag", "bg")[k % 3])
        rep = birationality_check(p)
        assert rep.is_birational == (_generic_fibre_size(p, rng) == 1), p
        if rep.is_birational:
            assert build_family_map(p).compose(invert_family(p)).is_identity()
        seen[rep.is_birational] += 1
    assert seen[True] > 50 and seen[False] > 5


# -- inverse ------------------------------------------------------------------

def test_inverse_examples():
    assert invert_family(pm((0, 1, 1), (1, 0, 0), (0, 1, 0))) == PlaneMap(1 / Y, X - 1 / Y)
    assert invert_family(pm((0, 0, 1), (0, 1, 0), (0, 0, 1))) == PlaneMap(X * Y, X)


def test_inverse_refuses_non_birational():
    with pytest.raises(NotBirationalError) as err:
        invert_family(pm((0, 1, 1), (0, 1, 0), (0, 2, 0)))
    assert CLAUSE_INDEPENDENT in str(err.value)


def test_inverse_round_trips_random():
    rng = random.Random(11)
    done = 0
    while done < 100:
        p = random_params(rng, gaussian=done % 2 == 1)
        if not birationality_check(p).is_birational:
            continue
        f, g = build_family_map(p), invert_family(p)
        assert f.compose(g).is_identity()
        assert g.compose(f).is_identity()
        F, G = homogenize(f), homogenize(g)
        assert compose_reduce(F, G).is_identity()
        done += 1


# -- Jacobian -----------------------------------------------------------------

def test_jacobian_numerators_against_sympy():
    rng = random.Random(3)
    for k in range(100):
        p = random_params(rng, gaussian=k % 3 == 0)
        nums = jacobian_numerators(p)
        assert forward_jacobian_ok(p, nums)
        if birationality_check(p).is_birational:
            assert inverse_jacobian_ok(p, invert_family(p), nums)


def test_jacobian_dependent_rows_degenerate():
    nums = jacobian_numerators(pm((0, 1, 1), (0, 1, 0), (0, 2, 0)))
    assert nums.degenerate


def test_jacobian_numerators_direct_example():
    # (y, x/y): (bg)01 = 0, (bg)02 = 0, (bg)12 = 1
    fwd, inv = jacobian_numerators(pm((0, 0, 1), (0, 1, 0), (0, 0, 1)))
    x, y = MultiPoly.gens(XY)
    assert fwd == y
    assert inv == -x


# -- projective ---------------------------------------------------------------

@pytest.mark.parametrize(
    "plane, comps",
    [
        (PlaneMap(Y, X / Y), (x0 * x2, x2**2, x0 * x1)),
        (PlaneMap(X, Y / X), (x0 * x1, x1**2, x0 * x2)),
        (PlaneMap(X + Y, 1 / X), (x0 * x1, x1 * (x1 + x2), x0**2)),
    ],
)
def test_homogenize_examples(plane, comps):
    F = homogenize(plane)
    assert F == ProjectiveMap(comps) and F.degree == 2
    assert F.to_plane() == plane


def test_compose_reduce_examples():
    F = homogenize(PlaneMap(Y, X / Y))
    assert compose_reduce(F, F).degree == 3
    G = homogenize(PlaneMap(X, Y / X))
    assert compose_reduce(G, G) == ProjectiveMap((x0 * x1**2, x1**3, x0**2 * x2))
    ident = ProjectiveMap.identity()
    assert compose_reduce(F, ident) == F and compose_reduce(ident, F) == F


def test_compose_reduce_agrees_with_affine_composition():
    rng = random.Random(5)
    for _ in range(30):
        p, q = random_params(rng), random_params(rng)
        f, g = build_family_map(p), build_family_map(q)
        try:
            fg = f.compose(g)
        except Exception:
            continue
        H = compose_reduce(homogenize(f), homogenize(g))
        assert H.to_plane() == fg
        assert H == homogenize(fg)


def test_family_degree_at_most_two():
    rng = random.Random(9)
    for _ in range(100):
        assert homogenize(build_family_map(random_params(rng, gaussian=True))).degree <= 2


def test_degenerate_composition():
    # [x0 : 0 : 0] sends everything to one point, where [x1 : x2 : 0]... vanishes
    collapse = ProjectiveMap((x0, MultiPoly.zero(PROJ), MultiPoly.zero(PROJ)))
    outer = ProjectiveMap((x1, x2, MultiPoly.zero(PROJ)))
    with pytest.raises(DegenerateCompositionError):
        compose_reduce(outer, collapse)


def test_projective_invariants():
    with pytest.raises(InvariantViolation):
        ProjectiveMap((x0, x1**2, x2))
    with pytest.raises(InvariantViolation):
        ProjectiveMap((MultiPoly.zero(PROJ),) * 3)
    F = ProjectiveMap((x0 * x1, x1 * x1, x1 * x2))
    assert F.is_identity()
