"""One-dimensional Möbius maps z -> (az+b)/(cz+d) over Q(i).

Periodicity is decided exactly from the invariant j = tr^2/det.  Writing
zeta for the ratio of the eigenvalues, j - 2 = zeta + 1/zeta, and zeta is a
root of unity of order k only if 2cos(2 pi/k) lies in Q(i), hence is rational.
That leaves k in {1, 2, 3, 4, 6}, i.e. j in {4, 0, 1, 2, 3}.
"""

from __future__ import annotations

from dataclasses import dataclass

from birmap.errors import DomainError
from birmap.exact.gaussian import I, ONE, ZERO, GaussianRational, as_gaussian, format_scalar, gaussian_sqrt
from birmap.exact.poly import XY, MultiPoly
from birmap.exact.ratfunc import RationalFunction

__all__ = [
    "MoebiusMap",
    "PeriodReport",
    "RootPairData",
    "RepeatedRootError",
    "moebius_from_h",
    "moebius_from_m",
    "periodicity_exact",
    "geometric_sum_vanishing",
    "root_of_unity_order",
    "root_pair_data",
    "IDENTITY",
    "FINITE_ORDER",
    "PARABOLIC",
    "NON_PERIODIC",
]

IDENTITY = "Identity"
FINITE_ORDER = "FiniteOrder"
PARABOLIC = "Parabolic"
NON_PERIODIC = "NonPeriodic"

_ORDER_BY_J = {0: 2, 1: 3, 2: 4, 3: 6}


class RepeatedRootError(DomainError):
    """z^2 - g0 z - b0 has a double root (g0^2 + 4 b0 = 0)."""


@dataclass(frozen=True)
class MoebiusMap:
    """Matrix ((a, b), (c, d)) acting by z -> (az + b)/(cz + d)."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, as_gaussian(getattr(self, name)))
        if not self.det():
            raise DomainError("Möbius matrix must have nonzero determinant")

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> GaussianRational:
        return self.a * self.d - self.b * self.c

    def trace(self) -> GaussianRational:
        return self.a + self.d

    def trace_invariant(self) -> GaussianRational:
        t = self.trace()
        return t * t / self.det()

    def is_scalar(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Matrix product, i.e. composition self ∘ other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def power(self, n: int) -> "MoebiusMap":
        if n < 0:
            raise DomainError("negative powers are not supported")
        out = MoebiusMap(ONE, ZERO, ZERO, ONE)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __call__(self, z):
        z = as_gaussian(z)
        den = self.c * z + self.d
        if not den:
            raise ZeroDivisionError("point maps to infinity")
        return (self.a * z + self.b) / den

    def as_function(self, var: int | str = 0, variables=XY) -> RationalFunction:
        """The map as a rational function of one of ``variables``."""
        z = RationalFunction.gens(variables)[variables.index(var) if isinstance(var, str) else var]
        return (z * self.a + self.b) / (z * self.c + self.d)

    def compose_function(self, g: RationalFunction) -> RationalFunction:
        """self ∘ g for a rational function g."""
        return (g * self.a + self.b) / (g * self.c + self.d)

    def __str__(self):
        return "((" + ", ".join(format_scalar(v) for v in (self.a, self.b)) + "), (" + ", ".join(
            format_scalar(v) for v in (self.c, self.d)
        ) + "))"


def moebius_from_h(gamma0, beta0) -> MoebiusMap:
    """h(y) = b0/(g0 + y) as the matrix ((0, b0), (1, g0))."""
    beta0 = as_gaussian(beta0)
    if not beta0:
        raise DomainError("beta0 = 0 makes h constant")
    return MoebiusMap(ZERO, beta0, ONE, as_gaussian(gamma0))


def moebius_from_m(alpha0, alpha1) -> MoebiusMap:
    """m(x) = a0 + a1 x as the matrix ((a1, a0), (0, 1))."""
    alpha1 = as_gaussian(alpha1)
    if not alpha1:
        raise DomainError("alpha1 = 0 makes m constant")
    return MoebiusMap(alpha1, as_gaussian(alpha0), ZERO, ONE)


@dataclass(frozen=True)
class PeriodReport:
    periodic: bool
    period: int | None
    trace_invariant: GaussianRational
    classification: str

    def to_dict(self) -> dict:
        return {
            "periodic": self.periodic,
            "period": self.period,
            "trace_invariant": format_scalar(self.trace_invariant),
            "classification": self.classification,
        }


def periodicity_exact(M: MoebiusMap) -> PeriodReport:
    """Exact period of M as a Möbius map, confirmed by a matrix power.

    >>> periodicity_exact(moebius_from_h(1, -1)).period
    3
    """
    j = M.trace_invariant()
    if M.is_scalar():
        return PeriodReport(True, 1, j, IDENTITY)
    if j.is_real() and j.re.denominator == 1 and int(j.re) in _ORDER_BY_J:
        k = _ORDER_BY_J[int(j.re)]
        if not M.power(k).is_scalar() or any(M.power(s).is_scalar() for s in range(1, k)):
            raise AssertionError(f"order lookup disagrees with matrix powers for {M}")
        return PeriodReport(True, k, j, FINITE_ORDER)
    if j == 4:
        return PeriodReport(False, None, j, PARABOLIC)
    return PeriodReport(False, None, j, NON_PERIODIC)


def root_of_unity_order(z) -> int | None:
    """Multiplicative order of z in Q(i) when z is a root of unity (1, 2 or 4)."""
    z = as_gaussian(z)
    if z == ONE:
        return 1
    if z == -ONE:
        return 2
    if z == I or z == -I:
        return 4
    return None


def geometric_sum_vanishing(alpha1, k: int, n_max: int = 64) -> int | None:
    """Least n <= n_max with 1 + w + w^2 + ... + w^n = 0 for w = alpha1^k.

    The sum vanishes iff w != 1 and w^(n+1) = 1, so n = ord(w) - 1.
    """
    alpha1 = as_gaussian(alpha1)
    if not alpha1:
        raise DomainError("alpha1 must be nonzero")
    if k < 1:
        raise DomainError("k must be positive")
    w = alpha1**k
    order = root_of_unity_order(w)
    if order is None or order == 1:
        return None
    n = order - 1
    return n if n <= n_max else None


@dataclass(frozen=True)
class RootPairData:
    """Roots p, q of z^2 - g0 z - b0 and m with m^2 = q/p.

    ``exact`` is true when p, q and m all lie in Q(i).  Otherwise the exact
    fields that do exist are filled in and ``numeric`` holds mpmath values
    (p, q, m) at 128-bit precision.
    """

    gamma0: GaussianRational
    beta0: GaussianRational
    p: GaussianRational | None
    q: GaussianRational | None
    m: GaussianRational | None
    exact: bool
    min_poly: str
    numeric: tuple

    def to_dict(self) -> dict:
        fmt = lambda v: None if v is None else format_scalar(v)
        return {
            "p": fmt(self.p),
            "q": fmt(self.q),
            "m": fmt(self.m),
            "exact": self.exact,
            "min_poly": self.min_poly,
        }


def _min_poly_text(gamma0, beta0) -> str:
    z = MultiPoly.gens(("z",))[0]
    return str(z * z - z * gamma0 - beta0).replace(" ", "")


def root_pair_data(gamma0, beta0) -> RootPairData:
    """Split-case data for z^2 - g0 z - b0; raises :class:`RepeatedRootError` when D = 0."""
    import mpmath

    gamma0, beta0 = as_gaussian(gamma0), as_gaussian(beta0)
    if not beta0:
        raise DomainError("beta0 must be nonzero")
    disc = gamma0 * gamma0 + 4 * beta0
    if not disc:
        raise RepeatedRootError("g0^2 + 4 b0 = 0: double root")
    text = _min_poly_text(gamma0, beta0)
    s = gaussian_sqrt(disc)
    with mpmath.workprec(128):
        if s is None:
            sn = mpmath.sqrt(_mpc(disc))
            g = _mpc(gamma0)
            pn, qn = (g + sn) / 2, (g - sn) / 2
            mn = mpmath.sqrt(qn / pn)
            return RootPairData(gamma0, beta0, None, None, None, False, text, (pn, qn, mn))
        p = (gamma0 + s) / 2
        q = (gamma0 - s) / 2
        m = gaussian_sqrt(q / p)
        pn, qn = _mpc(p), _mpc(q)
        mn = _mpc(m) if m is not None else mpmath.sqrt(qn / pn)
    return RootPairData(gamma0, beta0, p, q, m, m is not None, text, (pn, qn, mn))


def _mpf(q):
    import mpmath

    return mpmath.mpf(q.numerator) / q.denominator


def _mpc(z: GaussianRational):
    import mpmath

    return mpmath.mpc(_mpf(z.re), _mpf(z.im))
