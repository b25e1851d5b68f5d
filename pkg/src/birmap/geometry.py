"""Points, lines, special loci and orbit collisions on P^2 over Q(i)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from birmap.errors import IndeterminatePointError, InvariantViolation
from birmap.exact.gaussian import ONE, ZERO, GaussianRational, as_gaussian, format_scalar
from birmap.maps import (
    ParameterTuple,
    ProjectiveMap,
    family_projective,
    homogenize,
    invert_family,
    require_birational,
)

__all__ = [
    "ProjPoint",
    "ProjLine",
    "SpecialLoci",
    "OrbitRecord",
    "Collision",
    "ASReport",
    "special_loci",
    "apply_map",
    "orbit_of_point",
    "as_diagnostic",
    "DEFAULT_HORIZON",
]

DEFAULT_HORIZON = 64
# orbits that wander grow in height roughly like 2**n; stop them past this size
HEIGHT_BUDGET_BITS = 4096


def _normalize(coords) -> tuple:
    c = tuple(as_gaussian(v) for v in coords)
    if len(c) != 3:
        raise InvariantViolation("projective objects need three coordinates")
    lead = next((v for v in c if v), None)
    if lead is None:
        raise InvariantViolation("coordinates must not all vanish")
    if lead != ONE:
        inv = lead.inverse()
        c = tuple(v * inv for v in c)
    return c


@dataclass(frozen=True)
class ProjPoint:
    """[x0 : x1 : x2], scaled so the first nonzero coordinate is 1."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", _normalize(self.coords))

    def __str__(self):
        return "[" + " : ".join(format_scalar(c) for c in self.coords) + "]"

    def to_list(self):
        return [format_scalar(c) for c in self.coords]

    def height_bits(self) -> int:
        return max(
            max(abs(q.numerator).bit_length(), q.denominator.bit_length())
            for c in self.coords
            for q in (c.re, c.im)
        )


@dataclass(frozen=True)
class ProjLine:
    """The line c0*x0 + c1*x1 + c2*x2 = 0, scaled like :class:`ProjPoint`."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize(self.coeffs))

    def contains(self, p: ProjPoint) -> bool:
        return not sum((a * b for a, b in zip(self.coeffs, p.coords)), ZERO)

    def sample_points(self, count: int, rng) -> list[ProjPoint]:
        """``count`` distinct rational points on the line, drawn with ``rng``."""
        c = self.coeffs
        # two independent points spanning the line
        k = next(i for i in range(3) if c[i])
        j, l = [i for i in range(3) if i != k]
        p1 = [ZERO] * 3
        p1[j], p1[k] = ONE, -c[j] / c[k]
        p2 = [ZERO] * 3
        p2[l], p2[k] = ONE, -c[l] / c[k]
        out: list[ProjPoint] = []
        while len(out) < count:
            s = GaussianRational(rng.randint(-9, 9))
            t = GaussianRational(rng.randint(-9, 9))
            if not s and not t:
                continue
            q = ProjPoint(tuple(s * a + t * b for a, b in zip(p1, p2)))
            if q not in out:
                out.append(q)
        return out

    def __str__(self):
        names = ("x0", "x1", "x2")
        parts = []
        for c, n in zip(self.coeffs, names):
            if not c:
                continue
            s = format_scalar(c)
            parts.append(n if s == "1" else f"({s})*{n}")
        return "{" + " + ".join(parts) + " = 0}"

    def to_list(self):
        return [format_scalar(c) for c in self.coeffs]


@dataclass(frozen=True)
class SpecialLoci:
    """Named exceptional lines, indeterminacy points and collapse targets.

    ``collapse_targets`` maps each exceptional line label of F (S0, S1, ...) to
    the label of the point it is contracted onto (A0, A1, ...).
    """

    exceptional: dict
    indeterminacy_f: dict
    exceptional_inv: dict
    indeterminacy_inv: dict
    collapse_targets: dict

    def target_point(self, line_label: str) -> ProjPoint:
        return self.indeterminacy_inv[self.collapse_targets[line_label]]

    def to_dict(self) -> dict:
        return {
            "exceptional": {k: v.to_list() for k, v in self.exceptional.items()},
            "indeterminacy_f": {k: v.to_list() for k, v in self.indeterminacy_f.items()},
            "exceptional_inv": {k: v.to_list() for k, v in self.exceptional_inv.items()},
            "indeterminacy_inv": {k: v.to_list() for k, v in self.indeterminacy_inv.items()},
            "collapse_targets": dict(self.collapse_targets),
        }


def _dedupe(prefix: str, raw: Sequence, kind):
    """Label entries prefix0, prefix1, ... and drop vanishing or repeated ones."""
    out: dict = {}
    alias: dict = {}
    for i, coords in enumerate(raw):
        if not any(coords):
            continue
        obj = kind(coords)
        label = f"{prefix}{i}"
        same = next((k for k, v in out.items() if v == obj), None)
        if same is None:
            out[label] = obj
            alias[label] = label
        else:
            alias[label] = same
    return out, alias


def special_loci(params: ParameterTuple) -> SpecialLoci:
    """Exceptional curves and indeterminacy points of F and of its inverse.

    Generic formulas are evaluated and coincident entries merged, which yields
    two lines per list for the degenerate families and three otherwise.
    """
    require_birational(params)
    a = params.alpha
    g = params.gamma
    ab12, ag12, bg12 = params.ab12, params.ag12, params.bg12
    bg01, bg02 = params.br("bg", 0, 1), params.br("bg", 0, 2)
    c = a[0] * bg12 - a[1] * bg02 + a[2] * bg01
    z, o = ZERO, ONE

    S = [(o, z, z), g, (a[1] * bg02 - a[2] * bg01, a[1] * bg12, a[2] * bg12)]
    A = [(z, o, z), (z, z, o), (bg12 * ag12, c * ag12, ab12 * bg12)]
    O = [(bg12, -bg02, bg01), (z, a[2], -a[1]), (z, g[2], -g[1])]
    T = [(params.det(), -bg12, z), (ab12, z, -ag12), (o, z, z)]

    exceptional, s_alias = _dedupe("S", S, ProjLine)
    targets, a_alias = _dedupe("A", A, ProjPoint)
    indet, _ = _dedupe("O", O, ProjPoint)
    exc_inv, _ = _dedupe("T", T, ProjLine)
    collapse = {}
    for i in range(3):
        s_label = s_alias.get(f"S{i}")
        a_label = a_alias.get(f"A{i}")
        if s_label is not None and a_label is not None and s_label not in collapse:
            collapse[s_label] = a_label
    return SpecialLoci(exceptional, indet, exc_inv, targets, collapse)


def apply_map(F: ProjectiveMap, p: ProjPoint) -> ProjPoint:
    """Image of ``p``; raises :class:`IndeterminatePointError` where F is undefined."""
    vals = [comp.evaluate(p.coords) for comp in F.components]
    if not any(vals):
        raise IndeterminatePointError(p)
    return ProjPoint(tuple(vals))


@dataclass(frozen=True)
class OrbitRecord:
    start: ProjPoint
    points: tuple
    collision: tuple | None = None  # (n, indeterminacy label)
    cycle_start: int | None = None
    cycle_length: int | None = None
    stopped_at: int | None = None  # set when the height budget ended the orbit early

    @property
    def collided(self) -> bool:
        return self.collision is not None


def orbit_of_point(
    F: ProjectiveMap,
    p: ProjPoint,
    loci: SpecialLoci,
    horizon: int = DEFAULT_HORIZON,
    height_budget: int = HEIGHT_BUDGET_BITS,
) -> OrbitRecord:
    """Iterate ``p`` until it meets an indeterminacy point, cycles, or reaches ``horizon``.

    Coordinates of a wandering orbit grow quickly; once they exceed
    ``height_budget`` bits the record is closed with ``stopped_at`` set.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    return _orbit(F, p, tuple(loci.indeterminacy_f.items()), horizon, height_budget)


@lru_cache(maxsize=4096)
def _orbit(F, p, indeterminacy, horizon, height_budget):
    lookup = {pt: label for label, pt in indeterminacy}
    points = [p]
    seen = {p: 0}
    current = p
    for n in range(horizon + 1):
        if current in lookup:
            return OrbitRecord(p, tuple(points), (n, lookup[current]))
        if n == horizon:
            break
        if current.height_bits() > height_budget:
            return OrbitRecord(p, tuple(points), stopped_at=n)
        current = apply_map(F, current)
        if current in seen:
            start = seen[current]
            return OrbitRecord(p, tuple(points), None, start, len(points) - start)
        seen[current] = len(points)
        points.append(current)
    return OrbitRecord(p, tuple(points))


@dataclass(frozen=True)
class Collision:
    line: str
    target: str
    n: int
    point: str

    def to_dict(self):
        return {"line": self.line, "target": self.target, "n": self.n, "point": self.point}


@dataclass(frozen=True)
class ASReport:
    is_as_on_p2: bool
    collisions: tuple
    horizon: int
    orbits: dict = field(default_factory=dict, compare=False)

    @property
    def checked_horizon(self) -> int:
        """Number of iterates actually examined for every collapse target."""
        stops = [r.stopped_at for r in self.orbits.values() if r.stopped_at is not None]
        return min(stops + [self.horizon])

    def to_dict(self) -> dict:
        return {
            "is_as_on_p2": self.is_as_on_p2,
            "horizon": self.horizon,
            "checked_horizon": self.checked_horizon,
            "collisions": [c.to_dict() for c in self.collisions],
        }


def as_diagnostic(params: ParameterTuple, horizon: int = DEFAULT_HORIZON) -> ASReport:
    """Follow every collapse target and report hits on indeterminacy points.

    A clean report only certifies stability up to ``horizon`` iterates.
    """
    loci = special_loci(params)
    F = family_projective(params)
    collisions = []
    orbits = {}
    for line, target in loci.collapse_targets.items():
        rec = orbit_of_point(F, loci.indeterminacy_inv[target], loci, horizon)
        orbits[target] = rec
        if rec.collision is not None:
            n, point = rec.collision
            collisions.append(Collision(line, target, n, point))
    return ASReport(not collisions, tuple(collisions), horizon, orbits)


def inverse_projective(params: ParameterTuple) -> ProjectiveMap:
    return homogenize(invert_family(params))
