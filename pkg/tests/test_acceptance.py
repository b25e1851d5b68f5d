"""Acceptance criteria 1-10, one test each.

Every test records a single PASS/FAIL line with its wall time.  Under
pytest the lines are printed in the terminal summary; run the file
directly (``python3 tests/test_acceptance.py``) for the lines alone.
"""

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from birmap.classifier import SUBCASES, classify, cross_check  # noqa: E402
from birmap.degrees import LINEAR, degree_sequence, dynamical_degree_estimate, fit_recurrence, growth_class, render_z  # noqa: E402
from birmap.exact import I, XY, GaussianRational, RationalFunction, parse_expr  # noqa: E402
from birmap.fibrations import (  # noqa: E402
    builtin_fibrations,
    detect_periodicity,
    double_root_jacobian,
    normal_form,
    split_jacobian,
    transversality,
    verify_fibration,
)
from birmap.geometry import as_diagnostic  # noqa: E402
from birmap.maps import ParameterTuple, PlaneMap, birationality_check, build_family_map, invert_family, jacobian_numerators  # noqa: E402
from birmap.moebius import moebius_from_h, periodicity_exact  # noqa: E402

from corpus import CORPUS, random_params  # noqa: E402
from oracles import AS_PATTERNS, brute_moebius_period, forward_jacobian_ok, inverse_jacobian_ok  # noqa: E402

P = ParameterTuple
RESULTS: list = []


def _record(number, title, fn):
    t0 = time.perf_counter()
    try:
        detail = fn()
        ok, err = True, None
    except AssertionError as exc:
        detail, ok, err = str(exc) or "assertion failed", False, exc
    elapsed = time.perf_counter() - t0
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title} ({elapsed:.2f} s){': ' + detail if detail else ''}")
    if err is not None:
        raise err
    return elapsed


def _exact_fibonacci(n):
    out = [2, 3]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out[:n]


def plane_map(a, b):
    return PlaneMap(parse_expr(a, XY), parse_expr(b, XY))


def random_gaussian(rng):
    return GaussianRational(rng.randint(-4, 4), rng.randint(-3, 3)) / rng.randint(1, 3)


# 1 --------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    seq = degree_sequence(P((0, 0, 1), (0, 1, 0), (0, 0, 1)), 10)
    assert list(seq) == [2, 3, 5, 8, 13, 21, 34, 55, 89, 144], list(seq)
    assert render_z(fit_recurrence(seq).char_poly) == "z^2-z-1"
    est = dynamical_degree_estimate(seq)
    assert est == Fraction(144, 89)
    assert abs(float(est) - (1 + math.sqrt(5)) / 2) < 1e-2
    assert time.perf_counter() - t0 < 10
    return "d_1..d_10 Fibonacci, z^2-z-1, 144/89"


def test_criterion_1_fibonacci_growth():
    _record(1, "Fibonacci growth", criterion_1)


# 2 --------------------------------------------------------------------------

def criterion_2():
    t0 = time.perf_counter()
    seq = degree_sequence(P((0, 1, 0), (0, 0, 1), (0, 1, 0)), 20)
    assert list(seq) == list(range(2, 22)), list(seq)
    fit = fit_recurrence(seq)
    assert render_z(fit.char_poly) == "z^2-2*z+1"
    assert growth_class(fit, seq).tag == LINEAR
    assert time.perf_counter() - t0 < 10
    return "d_1..d_20 = 2..21, (z-1)^2, Linear"


def test_criterion_2_linear_growth():
    _record(2, "Linear growth", criterion_2)


# 3 --------------------------------------------------------------------------

def criterion_3():
    t0 = time.perf_counter()
    seq = degree_sequence(P((0, 1, 1), (0, 1, 0), (0, 1, 1)), 8)
    assert list(seq) == [2**n for n in range(1, 9)], list(seq)
    assert dynamical_degree_estimate(seq) == 2
    assert time.perf_counter() - t0 < 60
    return "d_1..d_8 = 2^n, ratio exactly 2"


def test_criterion_3_exponential_growth():
    _record(3, "Exponential growth", criterion_3)


# 4 --------------------------------------------------------------------------

def criterion_4():
    p = P((0, 1, 1), (1, 0, 0), (0, 1, 0))
    assert build_family_map(p) == plane_map("x + y", "1/x")
    seq = degree_sequence(p, 10)
    assert list(seq) == _exact_fibonacci(10), list(seq)
    return "(x+y, 1/x): Fibonacci through d_10"


def test_criterion_4_gamma2_a():
    _record(4, "Fibonacci for (x+y, 1/x)", criterion_4)


# 5 --------------------------------------------------------------------------

def criterion_5():
    p = P((0, I, 1), (1, 0, 0), (0, 0, 1))
    assert build_family_map(p) == plane_map("i*x + y", "1/y")
    seq = degree_sequence(p, 8)
    assert list(seq) == [2, 2, 2, 1, 2, 2, 2, 1], list(seq)
    assert detect_periodicity(p, 24).period == 4
    return "d_1..d_8 = 2,2,2,1,2,2,2,1, period 4"


def test_criterion_5_periodic_gamma1_c():
    _record(5, "Periodic (ix+y, 1/y)", criterion_5)


# 6 --------------------------------------------------------------------------

def criterion_6():
    p = P((0, 0, 1), (-1, 0, 0), (1, 1, 0))
    assert build_family_map(p) == plane_map("y", "-1/(1 + x)")
    seq = list(degree_sequence(p, 12))
    assert seq == [2, 2, 2, 2, 2, 1] * 2, seq
    assert detect_periodicity(p, 24).period == 6
    assert periodicity_exact(moebius_from_h(1, -1)).period == 3
    return "6-periodic degrees, d_6 = d_12 = 1, period 6, h of order 3"


def test_criterion_6_gamma2_b2():
    _record(6, "Periodic (y, -1/(1+x))", criterion_6)


# 7 --------------------------------------------------------------------------

def _timed_pass(f, spec):
    t0 = time.perf_counter()
    v = verify_fibration(f, spec)
    assert time.perf_counter() - t0 < 1, f"{spec.label} took too long"
    assert v.status == "pass" and v.method == "exact", v.to_dict()


def criterion_7():
    # (a) W = x (1 - x) under (1 - x, (1 + y)/x)
    form = normal_form(P((1, -1, 0), (1, 0, 1), (0, 1, 0)))
    assert form.map == plane_map("1 - x", "(1 + y)/x")
    specs = {s.label: s for s in builtin_fibrations(form)}
    assert specs["W"].function == parse_expr("x*(1 - x)", XY)
    _timed_pass(form.map, specs["W"])

    # (b) g0 = 2, b0 = -1: K1 scale -1, K2 translate, W = K1^2 invariant
    form = normal_form(P((0, 0, 1), (-1, 0, 0), (2, 1, 0)))
    assert form.map == plane_map("y", "-1/(2 + x)")
    specs = {s.label: s for s in builtin_fibrations(form)}
    assert str(specs["K1"].transform) == "Scale(-1)" and str(specs["K2"].transform) == "Translate"
    assert str(specs["W"].transform) == "Invariant"
    assert specs["K2"].function == parse_expr("(x + y + 2)/((x + 1)*(y + 1))", XY)
    for label in ("K1", "K2", "W"):
        _timed_pass(form.map, specs[label])
    assert transversality(specs["K1"], specs["K2"]).determinant == double_root_jacobian(2)

    # (c) g0 = 0, b0 = 1: H1 scale i, H2 scale -i, Jacobian 4i/((1+x)^2 (1+y)^2)
    form = normal_form(P((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    assert form.map == plane_map("y", "1/x")
    specs = {s.label: s for s in builtin_fibrations(form)}
    assert specs["H1"].transform.factor == I and specs["H2"].transform.factor == -I
    assert specs["H1"].function == parse_expr("(-1 + i*x - i*y + x*y)/((x + 1)*(y + 1))", XY)
    for label in ("H1", "H2"):
        _timed_pass(form.map, specs[label])
    det = transversality(specs["H1"], specs["H2"]).determinant
    x, y = RationalFunction.gens(XY)
    assert det == split_jacobian(1, I) == RationalFunction.constant(XY, 4 * I) / ((x + 1) ** 2 * (y + 1) ** 2)
    return "W; K1, K2, W with 16c^2 Jacobian; H1, H2 with 4i Jacobian"


def test_criterion_7_fibration_identities():
    _record(7, "Exact fibration identities", criterion_7)


# 8 --------------------------------------------------------------------------

EXP_N = {"CD2-i": 6, "CD3-i": 6, "CD2-ii": 10, "CD3-ii": 9, "G2-a": 9}


def criterion_8():
    t0 = time.perf_counter()
    assert set(CORPUS) == set(SUBCASES)
    failed = []
    for name, p in CORPUS.items():
        assert classify(p).subcase == name, name
        if not cross_check(p, EXP_N.get(name, 12)).passed:
            failed.append(name)
    assert not failed, f"cross_check failed for {failed}"
    assert time.perf_counter() - t0 < 300
    return f"{len(CORPUS)} sub-cases classified and cross-checked"


def test_criterion_8_classifier_coverage():
    _record(8, "Classifier coverage", criterion_8)


# 9 --------------------------------------------------------------------------

def criterion_9():
    rng = random.Random(2024)
    inverses = 0
    while inverses < 100:
        p = random_params(rng, gaussian=inverses % 2 == 1)
        if not birationality_check(p).is_birational:
            continue
        assert build_family_map(p).compose(invert_family(p)).is_identity(), p
        inverses += 1

    periodic = 0
    for _ in range(200):
        g0 = random_gaussian(rng)
        kind = rng.randrange(3)
        if kind == 0 and g0:
            b0 = -(g0 * g0) / rng.choice([1, 2, 3, 4])
        else:
            b0 = random_gaussian(rng) or 1
        got = periodicity_exact(moebius_from_h(g0, b0)).period
        assert got == brute_moebius_period(g0, b0), (g0, b0)
        periodic += got is not None
    assert periodic > 20, "too few periodic samples to be meaningful"

    for k in range(100):
        p = random_params(rng, gaussian=k % 3 == 0)
        nums = jacobian_numerators(p)
        assert forward_jacobian_ok(p, nums), p
        if birationality_check(p).is_birational:
            assert inverse_jacobian_ok(p, invert_family(p), nums), p
    return f"100 inverses, 200 Moebius maps ({periodic} periodic), 100 Jacobians"


def test_criterion_9_property_suites():
    _record(9, "Property suites", criterion_9)


# 10 -------------------------------------------------------------------------

def criterion_10():
    for name, p in CORPUS.items():
        rep = as_diagnostic(p, 64)
        got = [(c.line, c.target, c.n, c.point) for c in rep.collisions]
        assert got == AS_PATTERNS[name], f"{name}: {got}"
        assert rep.is_as_on_p2 == (not got)
    assert as_diagnostic(CORPUS["CD2-i"], 64).is_as_on_p2
    return "collision patterns match for all 14 corpus tuples"


def test_criterion_10_as_concordance():
    _record(10, "AS diagnostic concordance", criterion_10)


CRITERIA = [
    (1, "Fibonacci growth", criterion_1),
    (2, "Linear growth", criterion_2),
    (3, "Exponential growth", criterion_3),
    (4, "Fibonacci for (x+y, 1/x)", criterion_4),
    (5, "Periodic (ix+y, 1/y)", criterion_5),
    (6, "Periodic (y, -1/(1+x))", criterion_6),
    (7, "Exact fibration identities", criterion_7),
    (8, "Classifier coverage", criterion_8),
    (9, "Property suites", criterion_9),
    (10, "AS diagnostic concordance", criterion_10),
]


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CRITERIA:
        try:
            _record(number, title, fn)
        except AssertionError:
            failures += 1
        print(RESULTS[-1], flush=True)
    print(f"{len(CRITERIA) - failures}/{len(CRITERIA)} acceptance criteria passed")
    sys.exit(1 if failures else 0)
