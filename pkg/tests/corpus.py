"""One representative parameter tuple per degenerate sub-case."""

from birmap.exact import I
from birmap.maps import ParameterTuple as P

CORPUS = {
    "CD2-i": P((0, 1, 1), (0, 1, 0), (0, 1, 1)),
    "CD2-ii": P((0, 0, 1), (0, 1, 0), (0, 0, 1)),
    "CD2-iii": P((0, 1, 0), (0, 0, 1), (0, 1, 0)),
    "CD3-i": P((0, 1, 2), (1, 2, 2), (0, 1, 1)),
    "CD3-ii": P((0, 0, 1), (1, 2, 4), (1, 1, 2)),
    "CD3-iii": P((1, 2, 0), (1, 1, 1), (0, 1, 1)),
    "G1-i-a": P((0, 1, 1), (1, 0, 0), (1, 0, 1)),
    "G1-i-b": P((0, 2, 1), (-1, 0, 0), (1, 0, 1)),
    "G1-i-c": P((0, I, 1), (1, 0, 0), (0, 0, 1)),
    "G1-ii-a": P((1, 3, 0), (1, 0, 0), (1, 0, 1)),
    "G1-ii-b": P((1, 3, 0), (-3, 0, 0), (3, 0, 1)),
    "G2-a": P((0, 1, 1), (1, 0, 0), (0, 1, 0)),
    "G2-b1": P((0, 0, 1), (1, 0, 0), (1, 1, 0)),
    "G2-b2": P((0, 0, 1), (-1, 0, 0), (1, 1, 0)),
}

# extra tuples exercising less common branches
EXTRA = {
    "G1-i-c/real": ("G1-i-c", P((0, -1, 1), (-1, 0, 0), (1, 0, 1))),
    "G1-i-b/unit": ("G1-i-b", P((0, 1, 1), (-1, 0, 0), (1, 0, 1))),
    "G1-ii-b/k4": ("G1-ii-b", P((0, 1, 0), (-1, 0, 1), (1, 0, 1))),
}


def random_params(rng, gaussian=False, degenerate=None):
    """Random small-integer tuple with (g1, g2) != (0, 0).

    ``degenerate`` forces "ag" or "bg" to vanish by making that row's
    (1, 2) part proportional to gamma's.
    """
    from birmap.exact import GaussianRational

    def scalar():
        re = rng.randint(-3, 3)
        return GaussianRational(re, rng.randint(-2, 2)) if gaussian else re

    while True:
        a, b, g = ([scalar() for _ in range(3)] for _ in range(3))
        if degenerate:
            t = scalar()
            row = a if degenerate == "ag" else b
            row[1], row[2] = t * g[1], t * g[2]
        if g[1] or g[2]:
            return P(tuple(a), tuple(b), tuple(g))
