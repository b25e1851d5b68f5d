import random

import pytest
import sympy as sp

from birmap.classifier import (
    ALPHA_GAMMA,
    BETA_GAMMA_GAMMA1,
    BETA_GAMMA_GAMMA2,
    BETA_GAMMA_GENERIC,
    SUBCASES,
    classify,
    cross_check,
    matrix_char_poly,
    predicted_model,
)
from birmap.degrees import BOUNDED, EXPONENTIAL, LINEAR, render_z
from birmap.errors import OutOfScopeError
from birmap.exact import I
from birmap.maps import ParameterTuple, birationality_check

from corpus import CORPUS, EXTRA, random_params

P = ParameterTuple


def test_corpus_covers_every_subcase():
    assert set(CORPUS) == set(SUBCASES)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_classification(name):
    assert classify(CORPUS[name]).subcase == name


@pytest.mark.parametrize("label", sorted(EXTRA))
def test_extra_classification(label):
    sub, p = EXTRA[label]
    assert classify(p).subcase == sub


def test_classify_examples():
    assert classify(P((0, 0, 1), (0, 1, 0), (0, 0, 1))).subcase == "CD2-ii"
    rep = classify(P((0, I, 1), (1, 0, 0), (0, 0, 1)))
    assert rep.subcase == "G1-i-c" and rep.family == BETA_GAMMA_GAMMA1
    assert rep.get("k") == 2 and rep.get("n") == 1 and rep.get("P") == 4
    rep = classify(P((0, 0, 1), (1, 0, 0), (1, 1, 0)))
    assert rep.family == BETA_GAMMA_GAMMA2 and rep.subcase.startswith("G2-b")


def test_families():
    assert classify(CORPUS["CD2-i"]).family == ALPHA_GAMMA
    assert classify(CORPUS["CD3-ii"]).family == BETA_GAMMA_GENERIC


def test_non_degenerate_out_of_scope():
    with pytest.raises(OutOfScopeError):
        classify(P((1, 2, 3), (1, 0, 1), (0, 1, 1)))


def test_both_degenerate_never_birational():
    # (ag)12 = (bg)12 = 0 violates a birationality clause, so no tuple can
    # need the dual classification
    rng = random.Random(4)
    for _ in range(300):
        p = random_params(rng, gaussian=True, degenerate="ag")
        b = list(p.beta)
        t = rng.randint(-3, 3)
        b[1], b[2] = t * p.gamma[1], t * p.gamma[2]
        q = P(p.alpha, tuple(b), p.gamma)
        assert not q.ag12 and not q.bg12
        assert not birationality_check(q).is_birational


def test_report_serializes_provenance():
    d = classify(CORPUS["G1-i-c"]).to_dict()
    assert d["subcase"] == "G1-i-c"
    assert all("value" in v and "provenance" in v for v in d["parameters_used"].values())


# -- models -------------------------------------------------------------------

def test_model_examples():
    m = predicted_model(classify(CORPUS["CD2-ii"]))
    assert render_z(m.char_poly) == "z^2-z-1" and m.initial_degrees == (2, 3)
    # h(y) = 1/y has order 2 and 2^2 is not a root of unity
    k2 = P((0, 2, 1), (1, 0, 0), (0, 0, 1))
    m = predicted_model(classify(k2))
    assert m.subcase == "G1-i-b" and m.k == 2 and m.predict(8) == (2,) * 8
    assert cross_check(k2, 8).sequence.degrees[:8] == (2,) * 8
    # h(x) = -1/(1+x) has order 3, so the degree pattern has period 6
    m = predicted_model(classify(CORPUS["G2-b2"]))
    assert m.k == 3 and m.predict(12) == (2, 2, 2, 2, 2, 1) * 2


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_picard_matrix_char_poly(name):
    m = predicted_model(classify(CORPUS[name]))
    if m.picard_matrix is None:
        return
    z = sp.Symbol("z")
    oracle = sp.Matrix(m.picard_matrix).charpoly(z).as_expr()
    assert render_z(matrix_char_poly(m.picard_matrix)) == render_z(m.char_poly)
    assert sp.expand(oracle - sp.sympify(render_z(m.char_poly).replace("^", "**"))) == 0


def test_model_growth_tags():
    expected = {
        "CD2-i": EXPONENTIAL, "CD3-i": EXPONENTIAL, "CD2-ii": EXPONENTIAL, "CD3-ii": EXPONENTIAL,
        "G2-a": EXPONENTIAL, "CD2-iii": LINEAR, "CD3-iii": LINEAR, "G1-i-a": LINEAR,
    }
    for name, p in CORPUS.items():
        assert predicted_model(classify(p)).growth == expected.get(name, BOUNDED)


# -- cross checks -------------------------------------------------------------

EXP_N = {"CD2-i": 6, "CD3-i": 6, "CD2-ii": 10, "CD3-ii": 9, "G2-a": 9}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_cross_check_corpus(name):
    rep = cross_check(CORPUS[name], EXP_N.get(name, 12))
    assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("label", sorted(EXTRA))
def test_cross_check_extra(label):
    rep = cross_check(EXTRA[label][1], 12)
    assert rep.passed, rep.to_dict()


def test_cross_check_examples():
    rep = cross_check(CORPUS["CD2-ii"], 10)
    assert rep.sequence.degrees == (2, 3, 5, 8, 13, 21, 34, 55, 89, 144)
    rep = cross_check(P((0, I, 1), (1, 0, 0), (0, 0, 1)), 8)
    assert rep.passed and rep.sequence.degrees[:8] == (2, 2, 2, 1, 2, 2, 2, 1)
    rep = cross_check(P((0, 0, 1), (-1, 0, 0), (1, 1, 0)), 12)
    assert rep.passed and rep.sequence.degrees[5] == 1 and rep.sequence.degrees[11] == 1


def test_cross_check_reports_mismatch():
    # feed a doctored sequence: the report must point at the bad index
    from birmap.degrees import DegreeSequence

    fake = DegreeSequence((2, 3, 5, 8, 14, 22, 36, 58, 94, 152))
    rep = cross_check(CORPUS["CD2-ii"], 10, seq=fake)
    assert not rep.passed and rep.closed_form_mismatch == 5


def test_random_degenerate_tuples_match_their_model():
    # classify is total on degenerate birational tuples and the model
    # agrees with the computed degrees
    rng = random.Random(8)
    seen = set()
    done = 0
    while done < 40:
        p = random_params(rng, degenerate=("ag", "bg")[done % 2])
        if rng.random() < 0.5:
            g = list(p.gamma)
            g[rng.choice([1, 2])] = 0
            if not (g[1] or g[2]):
                continue
            p = P(p.alpha, p.beta, tuple(g))
        if not birationality_check(p).is_birational or not birationality_check(p).is_degenerate:
            continue
        rep = classify(p)
        assert rep.subcase in SUBCASES
        N = 6 if predicted_model(rep).growth == EXPONENTIAL else 12
        check = cross_check(p, N)
        assert check.passed, (p, check.to_dict())
        seen.add(rep.subcase)
        done += 1
    assert len(seen) >= 6
