import random

import mpmath
import pytest

from birmap.errors import DomainError
from birmap.exact import I, ONE, GaussianRational
from birmap.moebius import (
    FINITE_ORDER,
    IDENTITY,
    NON_PERIODIC,
    PARABOLIC,
    MoebiusMap,
    RepeatedRootError,
    geometric_sum_vanishing,
    moebius_from_h,
    moebius_from_m,
    periodicity_exact,
    root_of_unity_order,
    root_pair_data,
)

from oracles import brute_moebius_period

G = GaussianRational


def test_from_h_examples():
    assert moebius_from_h(0, 1).matrix == ((0, 1), (1, 0))
    assert moebius_from_h(1, -1).matrix == ((0, -1), (1, 1))
    with pytest.raises(DomainError):
        moebius_from_h(0, 0)


def test_from_m():
    m = moebius_from_m(3, I)
    assert m(1) == 3 + I
    with pytest.raises(DomainError):
        moebius_from_m(1, 0)


@pytest.mark.parametrize(
    "g0, b0, periodic, period, cls",
    [
        (0, 1, True, 2, FINITE_ORDER),
        (1, -1, True, 3, FINITE_ORDER),
        (2, -1, False, None, PARABOLIC),
        (1, 1, False, None, NON_PERIODIC),
        (I, 1, True, 3, FINITE_ORDER),  # tr^2 = -1, det = -1, j = 1
        (1 + I, -I, True, 4, FINITE_ORDER),  # tr^2 = 2i, det = i, j = 2
        (I, 2, False, None, NON_PERIODIC),  # j = 1/2
    ],
)
def test_periodicity_examples(g0, b0, periodic, period, cls):
    rep = periodicity_exact(moebius_from_h(g0, b0))
    assert (rep.periodic, rep.period, rep.classification) == (periodic, period, cls)


def test_identity_matrix():
    rep = periodicity_exact(MoebiusMap(2, 0, 0, 2))
    assert rep.period == 1 and rep.classification == IDENTITY


def _random_h(rng):
    def q():
        return G(rng.randint(-4, 4), rng.randint(-3, 3)) / rng.randint(1, 3)

    kind = rng.randrange(4)
    if kind == 0:
        # hit a finite-order trace invariant on purpose: g0^2 = -j b0
        j = rng.choice([1, 2, 3, 4])
        g0 = q()
        if not g0:
            g0 = ONE
        return g0, -(g0 * g0) / j
    if kind == 1:
        return G(0), q() or ONE
    b0 = q()
    return q(), b0 or ONE


def test_periodicity_against_brute_force():
    rng = random.Random(17)
    periodic_seen = 0
    for _ in range(200):
        g0, b0 = _random_h(rng)
        rep = periodicity_exact(moebius_from_h(g0, b0))
        brute = brute_moebius_period(g0, b0)
        assert rep.period == brute, (g0, b0)
        periodic_seen += rep.periodic
    assert periodic_seen > 40


def test_reported_period_is_minimal():
    for g0, b0 in [(0, 1), (1, -1), (1 + I, -I), (3, -3), (2, -2)]:
        M = moebius_from_h(g0, b0)
        k = periodicity_exact(M).period
        assert M.power(k).is_scalar()
        assert not any(M.power(s).is_scalar() for s in range(1, k))


def test_root_of_unity_order():
    assert [root_of_unity_order(z) for z in (1, -1, I, -I, 2, 1 + I)] == [1, 2, 4, 4, None, None]


@pytest.mark.parametrize("a1, k, n", [(I, 2, 1), (1, 2, None), (-1, 3, 1), (I, 1, 3), (I, 4, None), (2, 1, None)])
def test_geometric_sum_examples(a1, k, n):
    assert geometric_sum_vanishing(a1, k, 12) == n


def test_geometric_sum_exhaustive():
    for a1 in (ONE, -ONE, I, -I):
        for k in range(1, 7):
            w = a1**k
            direct = None
            total = G(0)
            for n in range(0, 13):
                total += w**n
                if n >= 1 and not total:
                    direct = n
                    break
            assert geometric_sum_vanishing(a1, k, 12) == direct


def test_geometric_sum_rejects_zero():
    with pytest.raises(DomainError):
        geometric_sum_vanishing(0, 2)


def test_root_pair_examples():
    r = root_pair_data(0, 1)
    assert r.exact and {r.p, r.q} == {ONE, -ONE} and r.m**2 == r.q / r.p
    r = root_pair_data(1, -1)
    assert not r.exact and r.min_poly == "z^2-z+1"
    with mpmath.workprec(128):
        p, q, m = r.numeric
        assert abs(p * p - p + 1) < mpmath.mpf(2) ** -100
        assert abs(m * m - q / p) < mpmath.mpf(2) ** -100
    with pytest.raises(RepeatedRootError):
        root_pair_data(2, -1)


def test_root_pair_partial_exact():
    # roots 2 and -1 are rational but -1/2 has no square root in Q(i)
    r = root_pair_data(1, 2)
    assert not r.exact and r.p == 2 and r.q == -1 and r.m is None
