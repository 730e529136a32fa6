"""Exact planar primitives: vectors, 2x2 matrices, sectors and segments.

Everything here returns exact answers; predicates are sign tests on field
scalars and never touch floats.
"""

from __future__ import annotations

import math

from .errors import NonPositive
from .field import FieldScalar, scalar

_ZERO = FieldScalar.rational(0)
_ONE = FieldScalar.rational(1)


class Vec2:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = scalar(x)
        self.y = scalar(y)

    def __repr__(self):
        return "Vec2(%s, %s)" % (self.x, self.y)

    def __eq__(self, other):
        return isinstance(other, Vec2) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __add__(self, o):
        return Vec2(self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return Vec2(self.x - o.x, self.y - o.y)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, s):
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.x and not self.y

    def to_json(self):
        return [self.x.to_json(), self.y.to_json()]

    @classmethod
    def from_json(cls, obj):
        return cls(FieldScalar.from_json(obj[0]), FieldScalar.from_json(obj[1]))


def cross(u: Vec2, v: Vec2) -> FieldScalar:
    return u.x * v.y - u.y * v.x


def dot(u: Vec2, v: Vec2) -> FieldScalar:
    return u.x * v.x + u.y * v.y


def parallel(u: Vec2, v: Vec2) -> bool:
    return not cross(u, v)


def same_ray(u: Vec2, v: Vec2) -> bool:
    """u and v nonzero, pointing the same direction."""
    return parallel(u, v) and dot(u, v).sign() > 0


def ccw_sector_contains(u: Vec2, w: Vec2, v: Vec2) -> bool:
    """Is nonzero v inside the half-open CCW sector [u, w)?

    The sector starts on ray u (included) and sweeps counterclockwise to ray w
    (excluded).  u and w are never parallel-opposite-free here: every caller
    guarantees u != 0 != w and the sector angle lies in (0, 2pi).
    """
    if same_ray(v, u):
        return True
    if same_ray(v, w):
        return False
    cuw = cross(u, w).sign()
    cuv = cross(u, v).sign()
    cvw = cross(v, w).sign()
    if cuw > 0:  # convex sector
        return cuv > 0 and cvw > 0
    if cuw < 0:  # reflex sector: complement of the convex [w, u)
        return not (cross(w, v).sign() > 0 and cross(v, u).sign() > 0)
    # u, w parallel: angle is pi (opposite) since same-ray is excluded above
    return cuv > 0


def segment_point(a: Vec2, b: Vec2, p: Vec2):
    """Parameter t in [0, 1] with p = a + t*(b - a), or None if p is off it."""
    e = b - a
    r = p - a
    if cross(e, r):
        return None
    num = dot(r, e)
    den = dot(e, e)
    t = num / den
    if t.sign() < 0 or (t - 1).sign() > 0:
        return None
    return t


def segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2):
    """Proper parameters (t, s) of the crossing of [a,b] and [c,d], or None.

    Returns exact t, s in [0, 1] when the (non-parallel) supporting lines meet
    inside both segments.  Parallel segments always give None.
    """
    e1 = b - a
    e2 = d - c
    den = cross(e1, e2)
    if not den:
        return None
    w = c - a
    t = cross(w, e2) / den
    s = cross(w, e1) / den
    for v in (t, s):
        if v.sign() < 0 or (v - 1).sign() > 0:
            return None
    return t, s


def dist2_point_segment(p: Vec2, a: Vec2, b: Vec2) -> FieldScalar:
    """Exact squared distance from p to segment [a, b]."""
    e = b - a
    den = dot(e, e)
    if not den:
        w = p - a
        return dot(w, w)
    t = dot(p - a, e) / den
    if t.sign() < 0:
        t = _ZERO
    elif (t - 1).sign() > 0:
        t = _ONE
    q = a + e * t
    w = p - q
    return dot(w, w)


def polygon_contains(vertices: list[Vec2], p: Vec2) -> bool:
    """Point strictly inside / on the boundary of a convex-or-not CCW polygon.

    Used only for coarse disk/polygon overlap tests, so a boundary hit counts
    as containment.  Winding test with exact crossings.
    """
    n = len(vertices)
    winding = 0
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if segment_point(a, b, p) is not None:
            return True
        ay_le = (a.y - p.y).sign() <= 0
        by_le = (b.y - p.y).sign() <= 0
        if ay_le and not by_le:
            if cross(b - a, p - a).sign() > 0:
                winding += 1
        elif by_le and not ay_le:
            if cross(b - a, p - a).sign() < 0:
                winding -= 1
    return winding != 0


class Mat2:
    """Exact 2x2 matrix acting on column vectors."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (scalar(v) for v in (a, b, c, d))

    def __repr__(self):
        return "Mat2[[%s, %s], [%s, %s]]" % (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return (isinstance(other, Mat2) and self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def det(self) -> FieldScalar:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        if isinstance(other, Vec2):
            return Vec2(
                self.a * other.x + self.b * other.y,
                self.c * other.x + self.d * other.y,
            )
        return NotImplemented

    def inverse(self) -> "Mat2":
        det = self.det()
        if not det:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def pow(self, n: int) -> "Mat2":
        m = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Mat2.identity()
        while n:
            if n & 1:
                out = out * m
            m = m * m
            n >>= 1
        return out

    def to_json(self):
        return [[self.a.to_json(), self.b.to_json()],
                [self.c.to_json(), self.d.to_json()]]

    @classmethod
    def from_json(cls, rows):
        return cls(FieldScalar.from_json(rows[0][0]), FieldScalar.from_json(rows[0][1]),
                   FieldScalar.from_json(rows[1][0]), FieldScalar.from_json(rows[1][1]))


def horocycle_matrix(s) -> Mat2:
    """Lower-triangular unipotent [[1, 0], [s, 1]]."""
    return Mat2(1, 0, s, 1)


def geodesic_matrix(u) -> Mat2:
    """diag(u, 1/u) for u > 0."""
    u = scalar(u)
    if u.sign() <= 0:
        raise NonPositive("geodesic parameter must be positive")
    return Mat2(u, 0, 0, 1 / u)


def normalize_to_vertical(direction: Vec2) -> Mat2:
    """A in SL2 sending `direction` to the vertical (0, 1).

    For (p, q) with q != 0 this is [[q, -p], [0, 1/q]]; the vertical itself
    uses q = 1 and is fixed.  For horizontal input it is the quarter turn.
    """
    p, q = direction.x, direction.y
    if not q:
        if not p:
            raise ValueError("zero direction")
        return Mat2(0, -p, 1 / p, 0)
    return Mat2(q, -p, 0, 1 / q)


def canonical_direction(v: Vec2) -> Vec2:
    """Positive rescale of v to primitive integer coordinates, upper half plane.

    Rational-slope directions land on coprime integers with y > 0, or y == 0
    and x > 0.  Irrational slopes are scaled so some coordinate is 1.
    """
    if v.is_zero():
        raise ValueError("zero direction")
    if v.x.is_rational and v.y.is_rational:
        fx, fy = v.x.as_fraction(), v.y.as_fraction()
        m = math.lcm(fx.denominator, fy.denominator)
        nx = fx.numerator * (m // fx.denominator)
        ny = fy.numerator * (m // fy.denominator)
        g = math.gcd(nx, ny)
        nx, ny = nx // g, ny // g
        if ny < 0 or (ny == 0 and nx < 0):
            nx, ny = -nx, -ny
        return Vec2(nx, ny)
    # irrational slope: divide by |x| or |y|, flip into the upper half plane
    ref = v.y if v.y else v.x
    w = Vec2(v.x / abs(ref), v.y / abs(ref))
    if w.y.sign() < 0 or (not w.y and w.x.sign() < 0):
        w = -w
    return w


def boundary_point(v: Vec2):
    """Slope invariant x/y of a direction; None encodes the horizontal (infinity)."""
    if not v.y:
        return None
    return v.x / v.y
