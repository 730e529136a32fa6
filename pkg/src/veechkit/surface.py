"""Translation complexes: plane polygons glued edge-to-edge by translations.

A Surface validates its gluing table at construction, identifies vertices,
walks the corner cycles, and caches the derived topology: cone angles, the
singular set, area, and genus computed two independent ways (total angle
excess and the vertex/edge/face count).  Marked points are canonicalised here
so every later consumer sees one representative plus its full alias list.

Corner convention: corner (p, v) sits at vertex v of polygon p, between the
incoming edge v-1 and the outgoing edge v.  Its sector is swept CCW from the
outgoing edge direction (included) to the direction back along the incoming
edge (excluded).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (FieldMismatch, InconsistentTopology, InvalidParams,
                     NonMultipleOf2Pi, VeechkitError)
from .field import FieldScalar, scalar
from .geometry import (Mat2, Vec2, ccw_sector_contains, cross, parallel,
                       same_ray, segment_point)

Corner = tuple  # (polygon index, vertex index)


class Polygon:
    __slots__ = ("vertices", "n")

    def __init__(self, vertices):
        self.vertices = [v if isinstance(v, Vec2) else Vec2(*v) for v in vertices]
        self.n = len(self.vertices)

    def vertex(self, v: int) -> Vec2:
        return self.vertices[v % self.n]

    def edge(self, e: int) -> Vec2:
        """Vector along edge e, from vertex e to vertex e+1."""
        return self.vertices[(e + 1) % self.n] - self.vertices[e % self.n]

    def signed_area2(self) -> FieldScalar:
        # twice the shoelace area
        total = scalar(0)
        for i in range(self.n):
            total = total + cross(self.vertices[i], self.vertices[(i + 1) % self.n])
        return total

    def bbox(self):
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def locate(self, p: Vec2):
        """('vertex', v) / ('edge', e, t) / 'interior' / 'outside' for point p."""
        for v, q in enumerate(self.vertices):
            if p == q:
                return ("vertex", v)
        for e in range(self.n):
            t = segment_point(self.vertices[e], self.vertices[(e + 1) % self.n], p)
            if t is not None:
                return ("edge", e, t)
        winding = 0
        for i in range(self.n):
            a, b = self.vertices[i], self.vertices[(i + 1) % self.n]
            a_le = (a.y - p.y).sign() <= 0
            b_le = (b.y - p.y).sign() <= 0
            if a_le and not b_le and cross(b - a, p - a).sign() > 0:
                winding += 1
            elif b_le and not a_le and cross(b - a, p - a).sign() < 0:
                winding -= 1
        return "interior" if winding else "outside"


class MarkedPoint:
    """A regular marked point with its alias list across charts.

    kind is 'interior', 'edge' or 'vertex'; aliases is a tuple of
    (polygon, Vec2) pairs giving every way of naming the point, the first one
    canonical.
    """

    __slots__ = ("polygon", "at", "label", "kind", "aliases")

    def __init__(self, polygon, at, label, kind, aliases):
        self.polygon = polygon
        self.at = at
        self.label = label
        self.kind = kind
        self.aliases = tuple(aliases)

    def __repr__(self):
        return "MarkedPoint(%d, %s, %r)" % (self.polygon, self.at, self.label)


class Surface:
    def __init__(self, polygons, gluings, field_d=None, marked=(),
                 point_labels=None):
        self.polygons = [p if isinstance(p, Polygon) else Polygon(p)
                         for p in polygons]
        self.field_d = self._settle_field(field_d)
        self._validate_polygons()
        self.partner, self.translation = self._validate_gluings(gluings)
        self._build_vertex_classes()
        self._walk_corner_cycles()
        self.point_labels = dict(point_labels or {})
        self.marked = []
        for i, m in enumerate(marked):
            if isinstance(m, MarkedPoint):
                self._add_mark(m.polygon, m.at, m.label)
            else:
                poly, at = m[0], m[1]
                label = m[2] if len(m) > 2 and m[2] is not None else "m%d" % i
                self._add_mark(poly, at if isinstance(at, Vec2) else Vec2(*at), label)
        self._marks_by_polygon = {}
        for idx, mp in enumerate(self.marked):
            for (p, pt) in mp.aliases:
                self._marks_by_polygon.setdefault(p, []).append((idx, pt))

    # -- validation ----------------------------------------------------------

    def _settle_field(self, field_d):
        seen = set()
        for poly in self.polygons:
            for v in poly.vertices:
                seen.add(v.x.d)
                seen.add(v.y.d)
        seen.discard(0)
        if field_d is None:
            if len(seen) > 1:
                raise FieldMismatch("coordinates span several quadratic fields")
            field_d = seen.pop() if seen else 0
        else:
            if seen - {field_d}:
                raise FieldMismatch(
                    "coordinate field tags %s clash with declared d=%d"
                    % (sorted(seen), field_d))
        return field_d

    def _validate_polygons(self):
        if not self.polygons:
            raise InvalidParams("need at least one polygon")
        for i, poly in enumerate(self.polygons):
            if poly.n < 3:
                raise InvalidParams("polygon %d has fewer than 3 vertices" % i)
            for e in range(poly.n):
                if poly.edge(e).is_zero():
                    raise InvalidParams("polygon %d has a zero edge %d" % (i, e))
            if poly.signed_area2().sign() <= 0:
                raise InvalidParams(
                    "polygon %d must be counterclockwise with positive area" % i)
            for v in range(poly.n):
                # zero-angle spikes break the corner sectors; flat corners are fine
                if same_ray(poly.edge(v), -poly.edge(v - 1)):
                    raise InvalidParams(
                        "polygon %d has a zero-angle corner at vertex %d" % (i, v))

    def _validate_gluings(self, gluings):
        partner = {}
        for item in gluings:
            if isinstance(item, dict):
                a = (item["p1"], item["e1"])
                b = (item["p2"], item["e2"])
            else:
                a, b = tuple(item[0]), tuple(item[1])
            for (p, e) in (a, b):
                if not (0 <= p < len(self.polygons)) or not (0 <= e < self.polygons[p].n):
                    raise InvalidParams("gluing names missing edge %s" % ((p, e),))
            if a == b:
                raise InconsistentTopology("edge %s glued to itself" % (a,))
            for side in (a, b):
                if side in partner:
                    raise InconsistentTopology("edge %s glued twice" % (side,))
            partner[a] = b
            partner[b] = a
        for p, poly in enumerate(self.polygons):
            for e in range(poly.n):
                if (p, e) not in partner:
                    raise InconsistentTopology("edge %s left unglued" % ((p, e),))
        translation = {}
        for (p1, e1), (p2, e2) in partner.items():
            v1 = self.polygons[p1].edge(e1)
            v2 = self.polygons[p2].edge(e2)
            if not (v1 + v2).is_zero():
                raise InconsistentTopology(
                    "edges %s and %s are not translation-opposite"
                    % ((p1, e1), (p2, e2)))
            # crossing edge e1 forward maps x to x + T
            a = self.polygons[p1].vertex(e1)
            d = self.polygons[p2].vertex(e2 + 1)
            translation[(p1, e1)] = d - a
        return partner, translation

    # -- vertex identification and cone angles --------------------------------

    def _build_vertex_classes(self):
        corners = [(p, v) for p, poly in enumerate(self.polygons)
                   for v in range(poly.n)]
        parent = {c: c for c in corners}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for (p1, e1), (p2, e2) in self.partner.items():
            n2 = self.polygons[p2].n
            union((p1, e1), (p2, (e2 + 1) % n2))
        groups = {}
        for c in corners:
            groups.setdefault(find(c), []).append(c)
        self.vertex_classes = [sorted(g) for g in sorted(groups.values())]
        self.class_of = {}
        for i, g in enumerate(self.vertex_classes):
            for c in g:
                self.class_of[c] = i

    def next_corner(self, corner: Corner) -> Corner:
        """Rotate counterclockwise about the vertex: the corner across edge v-1."""
        p, v = corner
        n = self.polygons[p].n
        return self.partner[(p, (v - 1) % n)]

    def ray_out(self, corner: Corner) -> Vec2:
        p, v = corner
        return self.polygons[p].edge(v)

    def ray_in(self, corner: Corner) -> Vec2:
        p, v = corner
        return -self.polygons[p].edge(v - 1)

    def _walk_corner_cycles(self):
        east = Vec2(1, 0)
        self.cone_windings = []
        self.corner_cycles = []
        seen = set()
        cycles_by_class = {}
        for start in sorted(self.class_of):
            if start in seen:
                continue
            cycle, windings = [], 0
            c = start
            while True:
                cycle.append(c)
                seen.add(c)
                nxt = self.next_corner(c)
                if not same_ray(self.ray_in(c), self.ray_out(nxt)):
                    raise NonMultipleOf2Pi(
                        "corner chain breaks between %s and %s" % (c, nxt))
                if ccw_sector_contains(self.ray_out(c), self.ray_in(c), east):
                    windings += 1
                c = nxt
                if c == start:
                    break
            cls = self.class_of[start]
            if set(cycle) != set(self.vertex_classes[cls]):
                raise InconsistentTopology(
                    "corner cycle at %s does not match its vertex class" % (start,))
            cycles_by_class[cls] = (cycle, windings)
        for i in range(len(self.vertex_classes)):
            cycle, windings = cycles_by_class[i]
            self.corner_cycles.append(cycle)
            self.cone_windings.append(windings)
        self.singular_classes = [i for i, w in enumerate(self.cone_windings) if w > 1]

    def is_singular_corner(self, corner: Corner) -> bool:
        return self.cone_windings[self.class_of[corner]] > 1

    # -- derived topology ------------------------------------------------------

    @property
    def area(self) -> FieldScalar:
        total = scalar(0)
        for poly in self.polygons:
            total = total + poly.signed_area2()
        return total / 2

    def component_count(self) -> int:
        seen, count = set(), 0
        for p0 in range(len(self.polygons)):
            if p0 in seen:
                continue
            count += 1
            stack = [p0]
            while stack:
                p = stack.pop()
                if p in seen:
                    continue
                seen.add(p)
                for e in range(self.polygons[p].n):
                    q = self.partner[(p, e)][0]
                    if q not in seen:
                        stack.append(q)
        return count

    def genus(self) -> int:
        """Genus from the Euler count, cross-checked against total angle excess."""
        v = len(self.vertex_classes)
        e = len(self.partner) // 2
        f = len(self.polygons)
        chi = v - e + f
        excess = sum(w - 1 for w in self.cone_windings)
        if excess != -chi:
            raise InconsistentTopology(
                "angle excess %d disagrees with Euler count %d" % (excess, chi))
        if chi % 2:
            raise InconsistentTopology("odd Euler characteristic %d" % chi)
        return (2 - chi) // 2

    def default_cap(self) -> FieldScalar:
        total = scalar(0)
        for poly in self.polygons:
            x0, y0, x1, y1 = poly.bbox()
            total = total + (x1 - x0) + (y1 - y0)
        return total * 20

    # -- marked points ---------------------------------------------------------

    def _add_mark(self, poly: int, at: Vec2, label):
        if not (0 <= poly < len(self.polygons)):
            raise InvalidParams("marked point names missing polygon %d" % poly)
        where = self.polygons[poly].locate(at)
        if where == "outside":
            raise InvalidParams("marked point %s lies outside polygon %d" % (at, poly))
        if where == "interior":
            kind, aliases = "interior", [(poly, at)]
        elif where[0] == "edge":
            e = where[1]
            p2, e2 = self.partner[(poly, e)]
            other = at + self.translation[(poly, e)]
            if (poly, e) <= (p2, e2):
                aliases = [(poly, at), (p2, other)]
            else:
                aliases = [(p2, other), (poly, at)]
            kind = "edge"
        else:
            v = where[1]
            cls = self.class_of[(poly, v)]
            if self.cone_windings[cls] > 1:
                raise InvalidParams(
                    "cannot mark point at a singular vertex (cone angle %d*2pi)"
                    % self.cone_windings[cls])
            kind = "vertex"
            aliases = [(p, self.polygons[p].vertices[vv])
                       for (p, vv) in self.vertex_classes[cls]]
        canon = aliases[0]
        for mp in self.marked:
            if mp.aliases[0] == canon:
                raise InvalidParams("duplicate marked point at %s" % (canon[1],))
        self.marked.append(MarkedPoint(canon[0], canon[1], label, kind, aliases))

    def marks_in_polygon(self, p: int):
        return self._marks_by_polygon.get(p, [])

    def mark_by_label(self, label: str) -> int:
        for i, mp in enumerate(self.marked):
            if mp.label == label:
                return i
        raise InvalidParams("no marked point labelled %r" % label)

    def point_aliases(self, polygon: int, point: Vec2):
        """All chart representatives of a point: one for interior points, two
        for edge points, the whole class for vertices."""
        where = self.polygons[polygon].locate(point)
        if where == "outside":
            raise InvalidParams("point %s outside polygon %d" % (point, polygon))
        if where == "interior":
            return [(polygon, point)]
        if where[0] == "edge":
            e = where[1]
            p2, _ = self.partner[(polygon, e)]
            return [(polygon, point),
                    (p2, point + self.translation[(polygon, e)])]
        cls = self.class_of[(polygon, where[1])]
        return [(p, self.polygons[p].vertex(k))
                for (p, k) in self.vertex_classes[cls]]

    # -- transforms ------------------------------------------------------------

    def transform(self, mat: Mat2) -> "Surface":
        """Apply a positive-determinant matrix to every chart."""
        if mat.det().sign() <= 0:
            raise InvalidParams("transform must have positive determinant")
        polys = [[mat * v for v in poly.vertices] for poly in self.polygons]
        gluings = [(a, b) for a, b in self.partner.items() if a <= b]
        marked = [(mp.polygon, mat * mp.at, mp.label) for mp in self.marked]
        return Surface(polys, gluings, field_d=None,
                       marked=marked, point_labels=self.point_labels)

    def with_marks(self, marks) -> "Surface":
        """Same complex, fresh marked-point list."""
        gluings = [(a, b) for a, b in self.partner.items() if a <= b]
        polys = [poly.vertices for poly in self.polygons]
        return Surface(polys, gluings, field_d=self.field_d, marked=marks,
                       point_labels=self.point_labels)

    # -- equality and JSON -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Surface):
            return NotImplemented
        return (self.field_d == other.field_d
                and [p.vertices for p in self.polygons] ==
                    [p.vertices for p in other.polygons]
                and self.partner == other.partner
                and [(m.polygon, m.at, m.label) for m in self.marked] ==
                    [(m.polygon, m.at, m.label) for m in other.marked]
                and self.point_labels == other.point_labels)

    def to_json(self) -> dict:
        glue = sorted((a, b) for a, b in self.partner.items() if a <= b)
        out = {
            "field": {"d": self.field_d},
            "polygons": [{"vertices": [v.to_json() for v in poly.vertices]}
                         for poly in self.polygons],
            "gluings": [{"p1": a[0], "e1": a[1], "p2": b[0], "e2": b[1]}
                        for a, b in glue],
            "marked_points": [{"polygon": m.polygon, "at": m.at.to_json(),
                               "label": m.label} for m in self.marked],
        }
        if self.point_labels:
            out["point_labels"] = self.point_labels
        return out

    @classmethod
    def from_json(cls, obj) -> "Surface":
        field_d = int(obj.get("field", {}).get("d", 0)) or None
        polys = [[Vec2.from_json(v) for v in poly["vertices"]]
                 for poly in obj["polygons"]]
        gluings = [((g["p1"], g["e1"]), (g["p2"], g["e2"]))
                   for g in obj["gluings"]]
        marked = [(m["polygon"], Vec2.from_json(m["at"]), m.get("label"))
                  for m in obj.get("marked_points", [])]
        return cls(polys, gluings, field_d=field_d, marked=marked,
                   point_labels=obj.get("point_labels"))

    # -- presets ---------------------------------------------------------------

    @classmethod
    def square_torus(cls, marked=()) -> "Surface":
        poly = [(0, 0), (1, 0), (1, 1), (0, 1)]
        gluings = [((0, 0), (0, 2)), ((0, 1), (0, 3))]
        return cls([poly], gluings, field_d=None, marked=marked)

    @classmethod
    def cross(cls, a, b, marked=()) -> "Surface":
        """Symmetric cross: central (b x b)-square with four (a)-deep arms.

        Opposite outer edges are glued, giving a genus-2 surface with one cone
        point of angle 6*pi and area b*(4a + b).
        """
        a, b = scalar(a), scalar(b)
        if a.sign() <= 0 or b.sign() <= 0:
            raise InvalidParams("cross needs positive arm and core sizes")
        verts = [
            (a, 0), (a + b, 0), (a + b, a), (a + a + b, a),
            (a + a + b, a + b), (a + b, a + b), (a + b, a + a + b),
            (a, a + a + b), (a, a + b), (0, a + b), (0, a), (a, a),
        ]
        gluings = [((0, 0), (0, 6)), ((0, 1), (0, 11)), ((0, 2), (0, 4)),
                   ((0, 3), (0, 9)), ((0, 5), (0, 7)), ((0, 8), (0, 10))]
        return cls([verts], gluings, field_d=None, marked=marked)

    @classmethod
    def l_shape(cls, a, b, c, e, marked=()) -> "Surface":
        """L-shaped table from three rectangles, one cone point of angle 6*pi."""
        a, b, c, e = (scalar(v) for v in (a, b, c, e))
        for v in (a, b, c, e):
            if v.sign() <= 0:
                raise InvalidParams("l_shape needs positive side lengths")
        r0 = [(0, 0), (a, 0), (a, b), (0, b)]
        r1 = [(a, 0), (a + c, 0), (a + c, b), (a, b)]
        r2 = [(0, b), (a, b), (a, b + e), (0, b + e)]
        gluings = [((0, 1), (1, 3)), ((0, 2), (2, 0)), ((0, 0), (2, 2)),
                   ((0, 3), (1, 1)), ((1, 0), (1, 2)), ((2, 3), (2, 1))]
        return cls([r0, r1, r2], gluings, field_d=None, marked=marked)


def rational_fraction(x) -> Fraction:
    """Small helper for callers that know a scalar is rational."""
    return scalar(x).as_fraction()


def singularities(surface: Surface):
    """All vertex classes as (class id, angle multiple of pi, zero order,
    representative corner); the zero order k satisfies angle = 2(k+1)*pi."""
    return [(cls, 2 * w, w - 1, surface.vertex_classes[cls][0])
            for cls, w in enumerate(surface.cone_windings)]


def validate(polygons, gluings, field_d=None, marked=()):
    """Violations in a raw surface description; an empty list means valid.

    Unlike the constructor this never raises: each problem becomes one
    tagged string, and independent problems are all reported.
    """
    issues = []
    try:
        polys = [p if isinstance(p, Polygon) else Polygon(p) for p in polygons]
    except Exception as exc:
        return ["BadPolygon: %s" % exc]
    if not polys:
        return ["Empty: need at least one polygon"]
    for i, poly in enumerate(polys):
        if poly.n < 3:
            issues.append("BadPolygon(%d): fewer than 3 vertices" % i)
            continue
        if any(poly.edge(e).is_zero() for e in range(poly.n)):
            issues.append("BadPolygon(%d): zero-length edge" % i)
            continue
        if poly.signed_area2().sign() <= 0:
            issues.append("NotCounterclockwise(%d)" % i)
        for v in range(poly.n):
            if same_ray(poly.edge(v), -poly.edge(v - 1)):
                issues.append("ZeroAngleCorner(%d,%d)" % (i, v))
    partner = {}
    for item in gluings:
        if isinstance(item, dict):
            a = (item["p1"], item["e1"])
            b = (item["p2"], item["e2"])
        else:
            a, b = tuple(item[0]), tuple(item[1])
        bad = False
        for (p, e) in (a, b):
            if not (0 <= p < len(polys)) or not (0 <= e < polys[p].n):
                issues.append("MissingEdge(%d,%d)" % (p, e))
                bad = True
        if bad:
            continue
        if a == b:
            issues.append("SelfGluing(%d,%d)" % a)
            continue
        if a in partner or b in partner:
            issues.append("DuplicateGluing(%d,%d)" % (a if a in partner else b))
            continue
        partner[a] = b
        partner[b] = a
        v1, v2 = polys[a[0]].edge(a[1]), polys[b[0]].edge(b[1])
        if not parallel(v1, v2):
            issues.append("NonParallelGluing((%d,%d),(%d,%d))" % (a + b))
        elif not (v1 + v2).is_zero():
            issues.append("EdgeMismatch((%d,%d),(%d,%d))" % (a + b))
    for p, poly in enumerate(polys):
        for e in range(poly.n):
            if (p, e) not in partner:
                issues.append("UnmatchedEdge(%d,%d)" % (p, e))
    if issues:
        return issues
    try:
        Surface(polys, gluings, field_d=field_d, marked=marked)
    except VeechkitError as exc:
        issues.append("%s: %s" % (type(exc).__name__, exc))
    return issues
