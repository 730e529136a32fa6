"""Per-direction reports: cusp invariants, fat-direction sequences, census runs."""

from __future__ import annotations

import json

from .cylinders import classify_direction
from .errors import NoConnections, VeechkitError
from .geometry import Vec2, boundary_point, canonical_direction, cross, dot
from .linear import is_parabolic_fixing
from .trace import saddle_connections

__all__ = [
    "CuspInvariant", "cusp_invariant", "FatStep", "fat_sequence",
    "DirectionReport", "census", "report_to_json", "census_to_json",
]


class CuspInvariant:
    """Multiset of pairwise saddle-connection length ratios in one direction.

    Lengths are flow parameters along the direction (a common scale factor
    away from euclidean length, so the ratios are the same either way),
    sorted ascending; ratios is the multiset length[i]/length[j] over i < j,
    also sorted, so every entry is <= 1.
    """

    __slots__ = ("lengths", "ratios")

    def __init__(self, lengths):
        self.lengths = sorted(lengths)
        ratios = []
        for i in range(len(self.lengths)):
            for j in range(i + 1, len(self.lengths)):
                ratios.append(self.lengths[i] / self.lengths[j])
        ratios.sort()
        self.ratios = ratios

    def __eq__(self, other):
        if not isinstance(other, CuspInvariant):
            return NotImplemented
        return self.ratios == other.ratios

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(tuple(self.ratios))

    def __repr__(self):
        return "CuspInvariant({%s})" % ", ".join(str(r) for r in self.ratios)


def _as_vec(d) -> Vec2:
    return d if isinstance(d, Vec2) else Vec2(*d)


def cusp_invariant(surface, direction, cap=None) -> CuspInvariant:
    """The ratio multiset of the saddle connections along `direction`.

    Only the forward direction is scanned.  Raises NoConnections when the
    direction carries no saddle connection at all (a once-punctured torus
    has none, for instance).
    """
    conns = saddle_connections(surface, direction, cap=cap)
    if not conns:
        raise NoConnections("no saddle connection along %s" %
                            canonical_direction(_as_vec(direction)))
    return CuspInvariant([ev.param for _, ev in conns])


# -- sequences of fat directions ----------------------------------------------


class FatStep:
    """One entry of a fat_sequence: the direction phi^-n applied to the seed."""

    __slots__ = ("n", "direction", "kind", "ratio", "gap")

    def __init__(self, n, direction, kind, ratio, gap):
        self.n = n
        self.direction = direction
        self.kind = kind
        self.ratio = ratio
        self.gap = gap

    def __repr__(self):
        return "FatStep(n=%d, dir=%s, %s, ratio=%s)" % (
            self.n, self.direction, self.kind, self.ratio)


def fat_sequence(surface, theta, phi, seed_direction, n, cap=None):
    """Directions phi^-k(seed) for k = 1..n, classified one by one.

    phi must be parabolic and fix `theta` (NotParabolicMatrix otherwise);
    the produced directions then converge to theta, and each step records
    the classification kind, the certificate ratio when the step is Fat,
    and the slope gap to theta: |cross(dir, theta)| / |dot(dir, theta)|,
    the tangent of the angle between them (None on a perpendicular hit).
    """
    theta = canonical_direction(_as_vec(theta))
    is_parabolic_fixing(phi, theta)
    back = phi.inverse()
    steps = []
    v = _as_vec(seed_direction)
    if not v.x and not v.y:
        raise VeechkitError("seed direction must be nonzero")
    for k in range(1, n + 1):
        v = back * v
        dirc = canonical_direction(v)
        cls = classify_direction(surface, dirc, cap=cap)
        ratio = cls.certificate[2] if cls.kind == "Fat" else None
        den = dot(dirc, theta)
        gap = abs(cross(dirc, theta)) / abs(den) if den else None
        steps.append(FatStep(k, dirc, cls.kind, ratio, gap))
    return steps


# -- census -------------------------------------------------------------------


class DirectionReport:
    """Everything the census records about one direction."""

    __slots__ = ("direction", "kind", "xi", "m", "s_prime", "cusp",
                 "certificate")

    def __init__(self, direction, kind, xi, m=None, s_prime=None, cusp=None,
                 certificate=None):
        self.direction = direction
        self.kind = kind
        self.xi = xi          # boundary slope invariant x/y, None = horizontal
        self.m = m
        self.s_prime = s_prime
        self.cusp = cusp      # CuspInvariant, for parabolic directions
        self.certificate = certificate

    def __repr__(self):
        return "DirectionReport(%s, %s)" % (self.direction, self.kind)


def census(surface, directions, cap=None):
    """One DirectionReport per entry of `directions`, in input order.

    A direction the machinery cannot settle (incomplete decomposition, a
    domain error along the way) comes back Undetermined rather than
    raising, so a long run always produces a full table.
    """
    reports = []
    for d in directions:
        dirc = canonical_direction(_as_vec(d))
        xi = boundary_point(dirc)
        try:
            cls = classify_direction(surface, dirc, cap=cap)
        except VeechkitError:
            reports.append(DirectionReport(dirc, "Undetermined", xi))
            continue
        m = cls.signature.m if cls.signature else None
        cusp = None
        if cls.kind == "Parabolic":
            try:
                cusp = cusp_invariant(surface, dirc, cap=cap)
            except NoConnections:
                cusp = None
        reports.append(DirectionReport(dirc, cls.kind, xi, m=m,
                                       s_prime=cls.s_prime, cusp=cusp,
                                       certificate=cls.certificate))
    return reports


def _scalar_json(x):
    return None if x is None else x.to_json()


def report_to_json(rep: DirectionReport) -> dict:
    cert = None
    if rep.certificate is not None:
        mk, cyl, ratio = rep.certificate
        cert = {"mark": mk, "cylinder": cyl, "ratio": ratio.to_json()}
    return {
        "direction": rep.direction.to_json(),
        "class": rep.kind,
        "xi": _scalar_json(rep.xi),
        "m": rep.m,
        "s_prime": _scalar_json(rep.s_prime),
        "cusp_ratios": (None if rep.cusp is None
                        else [r.to_json() for r in rep.cusp.ratios]),
        "certificate": cert,
    }


def census_to_json(reports) -> str:
    """Canonical serialization: byte-identical across runs on equal input."""
    return json.dumps([report_to_json(r) for r in reports],
                      sort_keys=True, separators=(",", ":"))
