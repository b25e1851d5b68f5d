import random

import pytest
import sympy as sp

from birmap.errors import IndeterminatePointError, NotBirationalError
from birmap.exact import I, MultiPoly
from birmap.geometry import (
    ProjLine,
    ProjPoint,
    apply_map,
    as_diagnostic,
    inverse_projective,
    orbit_of_point,
    special_loci,
)
from birmap.maps import ParameterTuple, ProjectiveMap, birationality_check, family_projective

from corpus import CORPUS, random_params
from oracles import AS_PATTERNS

P = ParameterTuple


def pt(*c):
    return ProjPoint(c)


def test_point_normalization():
    assert pt(0, 2, 4) == pt(0, 1, 2)
    assert pt(0, I, 1) == pt(0, 1, -I)
    assert str(pt(2, 0, 1)) == "[1 : 0 : 1/2]"


def test_alpha_gamma_family_loci():
    # (ag)12 = 0 with a1 = g1 = 1, a2 = g2 = 1
    p = CORPUS["CD2-i"]
    loci = special_loci(p)
    assert len(loci.exceptional) == 2
    targets = set(loci.indeterminacy_inv.values())
    assert pt(0, 1, 0) in targets and pt(0, 0, 1) in targets
    assert pt(0, p.alpha[2], -p.alpha[1]) in loci.indeterminacy_f.values()


def test_beta_gamma_family_loci():
    p = CORPUS["G2-a"]
    a, g = p.alpha, p.gamma
    loci = special_loci(p)
    assert len(loci.exceptional) == 2
    O = set(loci.indeterminacy_f.values())
    assert pt(0, g[2], -g[1]) in O and pt(0, a[2], -a[1]) in O
    T = set(loci.exceptional_inv.values())
    assert ProjLine((p.ab12, 0, -p.ag12)) in T


def test_line_at_infinity_collapses_to_A0():
    for name, p in CORPUS.items():
        loci = special_loci(p)
        assert loci.exceptional["S0"] == ProjLine((1, 0, 0)), name
        assert loci.target_point("S0") == pt(0, 1, 0), name


def test_non_degenerate_has_three_lines():
    loci = special_loci(P((1, 2, 3), (1, 0, 1), (0, 1, 1)))
    assert len(loci.exceptional) == 3 and len(loci.indeterminacy_f) == 3


def test_special_loci_refuses_non_birational():
    with pytest.raises(NotBirationalError):
        special_loci(P((0, 1, 1), (0, 1, 0), (0, 2, 0)))


def test_apply_map_examples():
    F = family_projective(P((0, 0, 1), (0, 1, 0), (0, 0, 1)))  # (y, x/y)
    with pytest.raises(IndeterminatePointError):
        apply_map(F, pt(0, 1, 0))
    p = CORPUS["CD2-i"]
    assert apply_map(family_projective(p), pt(0, 1, 0)) == pt(0, 1, 0)
    ident = ProjectiveMap.identity()
    assert apply_map(ident, pt(3, I, 0)) == pt(3, I, 0)


# -- independent oracles for the closed formulas ------------------------------

def _sym(p: MultiPoly, syms):
    out = 0
    for e, c in p.terms.items():
        t = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        for s, k in zip(syms, e):
            t *= s**k
        out += t
    return out


def _lin(line, syms):
    return sum((sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)) * s
               for c, s in zip(line.coeffs, syms))


def _check_loci(p, rng):
    loci = special_loci(p)
    F = family_projective(p)
    Finv = inverse_projective(p)
    syms = sp.symbols("x0 x1 x2")
    jac = sp.Matrix([[_sym(c, syms).diff(s) for s in syms] for c in F.components]).det()
    jac_inv = sp.Matrix([[_sym(c, syms).diff(s) for s in syms] for c in Finv.components]).det()
    # exceptional lines divide the Jacobian determinant of the map
    for lines, det in ((loci.exceptional, jac), (loci.exceptional_inv, jac_inv)):
        for line in lines.values():
            var = next(s for c, s in zip(line.coeffs, syms) if c)
            on_line = sp.solve(_lin(line, syms), var)[0]
            assert sp.expand(det.subs(var, on_line)) == 0
    for o in loci.indeterminacy_f.values():
        assert all(not c.evaluate(o.coords) for c in F.components)
    for a in loci.indeterminacy_inv.values():
        assert all(not c.evaluate(a.coords) for c in Finv.components)
    # each exceptional line collapses onto its target
    for label, target in loci.collapse_targets.items():
        line = loci.exceptional[label]
        A = loci.indeterminacy_inv[target]
        hits = 0
        for q in line.sample_points(12, rng):
            if q in loci.indeterminacy_f.values():
                continue
            try:
                assert apply_map(F, q) == A
                hits += 1
            except IndeterminatePointError:
                continue
        assert hits >= 5



@pytest.mark.parametrize("name", sorted(CORPUS))
def test_loci_against_jacobian_corpus(name):
    _check_loci(CORPUS[name], random.Random(name))


def test_loci_against_jacobian_random():
    rng = random.Random(21)
    done = 0
    while done < 40:
        p = random_params(rng, gaussian=done % 4 == 0, degenerate=(None, "ag", "bg")[done % 3])
        if not birationality_check(p).is_birational:
            continue
        _check_loci(p, rng)
        rep = birationality_check(p)
        n = len(special_loci(p).exceptional)
        assert n == (2 if rep.is_degenerate else 3)
        done += 1


# -- orbits and stability -----------------------------------------------------

def test_orbit_collision_at_start():
    p = CORPUS["CD2-ii"]
    loci = special_loci(p)
    rec = orbit_of_point(family_projective(p), pt(0, 1, 0), loci, 10)
    assert rec.collision == (0, "O1")


def test_orbit_fixed_point_cycle():
    p = CORPUS["CD2-i"]
    loci = special_loci(p)
    rec = orbit_of_point(family_projective(p), pt(0, 1, 0), loci, 10)
    assert rec.collision is None and rec.cycle_length == 1


def test_orbit_deterministic_and_bounded():
    p = CORPUS["G1-i-a"]
    loci = special_loci(p)
    F = family_projective(p)
    r1 = orbit_of_point(F, pt(1, 2, 3), loci, 7)
    r2 = orbit_of_point(F, pt(1, 2, 3), loci, 7)
    assert r1 == r2 and len(r1.points) <= 8
    with pytest.raises(ValueError):
        orbit_of_point(F, pt(1, 2, 3), loci, 0)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_as_patterns(name):
    rep = as_diagnostic(CORPUS[name], 64)
    got = [(c.line, c.target, c.n, c.point) for c in rep.collisions]
    assert got == AS_PATTERNS[name]
    assert rep.is_as_on_p2 == (not got)


def test_as_examples():
    rep = as_diagnostic(P((0, 1, 1), (1, 0, 0), (0, 1, 0)), 64)
    assert not rep.is_as_on_p2
    c = rep.collisions[0]
    assert (c.target, c.n) == ("A1", 0)
    assert special_loci(P((0, 1, 1), (1, 0, 0), (0, 1, 0))).indeterminacy_f[c.point] == pt(0, 0, 1)
