"""Straight-line flow on a glued polygon complex.

The tracer develops a trajectory chart by chart.  Inside a polygon it solves
exactly for the first boundary crossing; at a glued edge it jumps to the
partner chart; at a regular vertex it resolves the continuation through the
corner sectors; at a cone point it stops.  Trajectories parallel to an edge
slide along it vertex to vertex.

All positions, directions and parameters are field scalars, so every incidence
(closing up, hitting a marked point, reaching a vertex) is decided exactly.
The flow parameter tau is normalised so the position is start + tau * v in the
developed picture; the geometric length is tau * |v|.
"""

from __future__ import annotations

from .errors import (AmbiguousStart, InconsistentTopology, InvalidParams,
                     VeechkitError)
from .field import FieldScalar, field_sqrt, scalar
from .geometry import (Vec2, canonical_direction, ccw_sector_contains, cross,
                       dist2_point_segment, dot, polygon_contains, same_ray,
                       segment_point)

_ZERO = FieldScalar.rational(0)

CLOSED = "ClosedUp"
SINGULAR = "HitSingularity"
MARKED = "HitMarkedPoint"
CAPPED = "CapExceeded"
STOPPED = "Stopped"

# tie-break rank at an equal parameter value
_RANK = {CLOSED: 0, STOPPED: 1, SINGULAR: 2, MARKED: 3}


class Segment:
    """One chart-worth of trajectory: from a to b inside polygon `polygon`.

    slide marks travel along a glued edge (recorded in the chart where the
    motion agrees with the edge orientation).
    """

    __slots__ = ("polygon", "a", "b", "slide", "tau0", "tau1", "edge")

    def __init__(self, polygon, a, b, slide, tau0, tau1, edge=None):
        self.polygon = polygon
        self.a = a
        self.b = b
        self.slide = slide
        self.tau0 = tau0
        self.tau1 = tau1
        self.edge = edge  # the edge a slide segment runs along

    def point_at(self, tau) -> Vec2:
        span = self.tau1 - self.tau0
        t = (tau - self.tau0) / span
        return self.a + (self.b - self.a) * t

    def __repr__(self):
        return "Segment(p%d %s -> %s%s)" % (
            self.polygon, self.a, self.b, ", slide" if self.slide else "")


class TraceEvent:
    __slots__ = ("kind", "segments", "param", "length", "length_squared",
                 "mark", "corner", "payload")

    def __init__(self, kind, segments, param, length, length_squared,
                 mark=None, corner=None, payload=None):
        self.kind = kind
        self.segments = segments
        self.param = param
        self.length = length
        self.length_squared = length_squared
        self.mark = mark
        self.corner = corner
        self.payload = payload

    @property
    def path(self):
        return [(s.polygon, s.a, s.b) for s in self.segments]

    @property
    def holonomy(self) -> "Vec2":
        """Displacement in the developed plane: the sum of the segment
        vectors (equals param * direction)."""
        out = Vec2(0, 0)
        for s in self.segments:
            out = out + (s.b - s.a)
        return out

    def __repr__(self):
        return "TraceEvent(%s, param=%s)" % (self.kind, self.param)


def _resolve_regular(surface, corner, v):
    # walk the corner cycle; the half-open sectors of a 2pi vertex tile the
    # circle, so exactly one corner owns direction v
    c = corner
    for _ in range(len(surface.vertex_classes[surface.class_of[corner]])):
        if ccw_sector_contains(surface.ray_out(c), surface.ray_in(c), v):
            return c
        c = surface.next_corner(c)
    raise InconsistentTopology("no corner sector at %s owns direction %s"
                               % (corner, v))


def _start_state(surface, polygon, point, v, corner):
    """Normalise the start into ('go', p, x) or ('slide', p, e, x).

    Returns (state, aliases) where aliases are the charts naming the start
    point, used for the closing-up test.  A start at a cone point gets no
    aliases: a separatrix returning to its cone is a saddle connection, not a
    closed loop.
    """
    if corner is not None and point is None:
        point = surface.polygons[corner[0]].vertex(corner[1])
        polygon = corner[0]
    where = surface.polygons[polygon].locate(point)
    if where == "outside":
        raise InvalidParams("start point %s lies outside polygon %d"
                            % (point, polygon))
    if where == "interior":
        return ("go", polygon, point), [(polygon, point)]
    if where[0] == "edge":
        e = where[1]
        edge = surface.polygons[polygon].edge(e)
        p2, e2 = surface.partner[(polygon, e)]
        other = point + surface.translation[(polygon, e)]
        aliases = [(polygon, point), (p2, other)]
        side = cross(edge, v).sign()
        if side == 0:
            # parallel to the edge: slide, in the chart agreeing with v
            if dot(v, edge).sign() > 0:
                return ("slide", polygon, e, point), aliases
            return ("slide", p2, e2, other), aliases
        if side < 0:  # pointing out of this chart: enter through the partner
            return ("go", p2, other), aliases
        return ("go", polygon, point), aliases
    # vertex start
    vi = where[1]
    cls = surface.class_of[(polygon, vi)]
    singular = surface.cone_windings[cls] > 1
    if singular:
        if corner is None:
            raise AmbiguousStart(
                "start at a cone point needs an explicit corner")
        if surface.class_of[corner] != cls:
            raise InvalidParams("corner %s does not sit at the start point"
                               % (corner,))
        if not ccw_sector_contains(surface.ray_out(corner),
                                   surface.ray_in(corner), v):
            raise InvalidParams(
                "direction %s does not leave through corner %s" % (v, corner))
        own = corner
        aliases = []
    else:
        own = _resolve_regular(surface, (polygon, vi), v)
        aliases = [(p, surface.polygons[p].vertex(k))
                   for (p, k) in surface.vertex_classes[cls]]
    p, k = own
    x = surface.polygons[p].vertex(k)
    if same_ray(v, surface.ray_out(own)):
        return ("slide", p, k, x), aliases
    return ("go", p, x), aliases


def _exit_solve(surface, p, x, v):
    """First boundary crossing of the ray x + t v, t > 0, in polygon p.

    Returns (t, y, vertex_or_None) where vertex is set when the crossing is a
    polygon vertex.
    """
    poly = surface.polygons[p]
    best = None
    for e in range(poly.n):
        edge = poly.edge(e)
        den = cross(v, edge)
        if not den:
            continue  # parallel: a vertex on this edge is caught via its mate
        a = poly.vertices[e]
        w = a - x
        t = cross(w, edge) / den
        if t.sign() <= 0:
            continue
        s = cross(w, v) / den
        if s.sign() < 0 or (s - 1).sign() > 0:
            continue
        if best is None or (t - best[0]).sign() < 0:
            vert = None
            if not s:
                vert = e
            elif s == 1:
                vert = (e + 1) % poly.n
            best = (t, e, vert)
    if best is None:
        raise InconsistentTopology(
            "ray from %s in polygon %d found no exit" % (x, p))
    t, e, vert = best
    y = poly.vertices[vert] if vert is not None else x + v * t
    return t, y, vert, e


def trace(surface, polygon=None, point=None, direction=None, *, corner=None,
          cap=None, stop_at_marked=True, stop_on=None, detect_closure=True,
          max_steps=200000) -> TraceEvent:
    """Flow from a start point until something happens.

    Start is (polygon, point), or corner=(p, v) alone for a vertex start; at a
    cone point the corner picks which of the coinciding sectors the ray leaves
    through.  Terminal kinds: ClosedUp (back at the start point),
    HitSingularity, HitMarkedPoint (unless stop_at_marked is off), CapExceeded,
    or Stopped when the stop_on hook fires.  Hook: stop_on(segment) may return
    (t_local, payload) to stop inside that segment.
    """
    v = direction if isinstance(direction, Vec2) else Vec2(*direction)
    if v.is_zero():
        raise InvalidParams("direction must be nonzero")
    state, aliases = _start_state(surface, polygon, point, v, corner)
    if not detect_closure:
        aliases = []

    vv = dot(v, v)
    vlen = field_sqrt(vv, surface.field_d)
    if cap is None:
        cap = surface.default_cap()
    cap = scalar(cap)
    cap2 = cap * cap

    segments: list[Segment] = []
    tau = _ZERO

    def finish(kind, param, mark=None, corner=None, payload=None):
        length = vlen * param if vlen is not None else None
        return TraceEvent(kind, segments, param, length, param * param * vv,
                          mark=mark, corner=corner, payload=payload)

    for _ in range(max_steps):
        # ---- advance one segment -------------------------------------------
        if state[0] == "slide":
            _, p, e, x = state
            poly = surface.polygons[p]
            target = poly.vertex(e + 1)
            dt = dot(target - x, v) / vv
            seg = Segment(p, x, target, True, tau, tau + dt, edge=e)
            arrive = (p, (e + 1) % poly.n)
        else:
            _, p, x = state
            t, y, vert, exit_edge = _exit_solve(surface, p, x, v)
            seg = Segment(p, x, y, False, tau, tau + t)
            arrive = (p, vert) if vert is not None else None

        # ---- mid-segment events --------------------------------------------
        hits = []
        span = seg.tau1 - seg.tau0
        for (pa, pt) in aliases:
            if pa != seg.polygon:
                continue
            tloc = segment_point(seg.a, seg.b, pt)
            if tloc is None:
                continue
            th = seg.tau0 + tloc * span
            if th.sign() > 0:
                hits.append((th, _RANK[CLOSED], CLOSED, None))
        if stop_at_marked:
            for (idx, pt) in surface.marks_in_polygon(seg.polygon):
                tloc = segment_point(seg.a, seg.b, pt)
                if tloc is None:
                    continue
                th = seg.tau0 + tloc * span
                if th.sign() > 0:
                    hits.append((th, _RANK[MARKED], MARKED, idx))
        if stop_on is not None:
            got = stop_on(seg)
            if got is not None:
                tloc, payload = got
                th = seg.tau0 + tloc * span
                if th.sign() > 0:
                    hits.append((th, _RANK[STOPPED], STOPPED, payload))
        if arrive is not None and surface.is_singular_corner(arrive):
            hits.append((seg.tau1, _RANK[SINGULAR], SINGULAR, arrive))

        if hits:
            best = hits[0]
            for h in hits[1:]:
                dcmp = (h[0] - best[0]).sign()
                if dcmp < 0 or (dcmp == 0 and h[1] < best[1]):
                    best = h
            th, _, kind, payload = best
            if th < seg.tau1:
                seg = Segment(seg.polygon, seg.a, seg.point_at(th), seg.slide,
                              seg.tau0, th, edge=seg.edge)
            segments.append(seg)
            if kind == CLOSED:
                return finish(CLOSED, th)
            if kind == MARKED:
                return finish(MARKED, th, mark=payload)
            if kind == STOPPED:
                return finish(STOPPED, th, payload=payload)
            return finish(SINGULAR, th, corner=payload)

        segments.append(seg)
        tau = seg.tau1

        # ---- cap ------------------------------------------------------------
        over = ((tau * vlen - cap).sign() > 0 if vlen is not None
                else (tau * tau * vv - cap2).sign() > 0)
        if over:
            return finish(CAPPED, tau)

        # ---- continue into the next chart ----------------------------------
        if arrive is not None:
            own = _resolve_regular(surface, arrive, v)
            p2, k2 = own
            x2 = surface.polygons[p2].vertex(k2)
            if same_ray(v, surface.ray_out(own)):
                state = ("slide", p2, k2, x2)
            else:
                state = ("go", p2, x2)
        else:
            p2, e2 = surface.partner[(p, exit_edge)]
            state = ("go", p2, seg.b + surface.translation[(p, exit_edge)])
    raise VeechkitError("trace exceeded %d segments without resolving"
                        % max_steps)


def departing_corners(surface, direction, cls=None):
    """Corners whose sector emits `direction`: k+1 per cone of angle 2(k+1)pi.

    With cls given, restrict to that vertex class (singular or not).
    """
    v = direction if isinstance(direction, Vec2) else Vec2(*direction)
    classes = [cls] if cls is not None else surface.singular_classes
    out = []
    for c in classes:
        for corner in surface.corner_cycles[c]:
            if ccw_sector_contains(surface.ray_out(corner),
                                   surface.ray_in(corner), v):
                out.append(corner)
    return out


def separatrices(surface, direction, *, cap=None, stop_at_marked=False):
    """Trace every separatrix leaving a cone point along `direction`.

    Returns [(corner, TraceEvent)].  Saddle connections in this direction are
    exactly the traces that end in HitSingularity, each found once (from its
    rear cone point).
    """
    v = direction if isinstance(direction, Vec2) else Vec2(*direction)
    out = []
    for corner in departing_corners(surface, v):
        ev = trace(surface, corner=corner, direction=v, cap=cap,
                   stop_at_marked=stop_at_marked)
        out.append((corner, ev))
    return out


def saddle_connections(surface, direction, *, cap=None):
    """The saddle connections along `direction` as (corner, TraceEvent)."""
    return [(c, ev) for (c, ev) in separatrices(surface, direction, cap=cap)
            if ev.kind == SINGULAR]


def advance(surface, polygon, point, direction, delta, *, corner=None):
    """The chart point reached after flowing exactly delta in parameter.

    Used to step along a leaf by a known amount; delta must be positive and
    the flow must not meet a cone point strictly earlier.
    """
    delta = scalar(delta)
    if delta.sign() <= 0:
        raise InvalidParams("advance needs a positive parameter step")

    def stop(seg):
        if (seg.tau1 - delta).sign() >= 0:
            span = seg.tau1 - seg.tau0
            return ((delta - seg.tau0) / span, None)
        return None

    ev = trace(surface, polygon, point, direction, corner=corner,
               stop_at_marked=False, stop_on=stop, detect_closure=False,
               cap=None)
    if ev.kind == SINGULAR and ev.param == delta:
        seg = ev.segments[-1]
        return seg.polygon, seg.b
    if ev.kind != STOPPED:
        raise InconsistentTopology(
            "flow ended with %s before reaching the requested step" % ev.kind)
    seg = ev.segments[-1]
    return seg.polygon, seg.b


class ConnectionEvidence:
    """Bounded evidence about separatrices through a point.

    kind is 'AllExtended' (count separatrices found, all continuing into a
    saddle connection within the cap), 'FoundNonExtending' (witness records
    the direction whose continuation ran past the cap), or 'Exhausted' (the
    chart development hit the node budget first, so no claim is made).
    """

    __slots__ = ("kind", "count", "witness")

    def __init__(self, kind, count=None, witness=None):
        self.kind = kind
        self.count = count
        self.witness = witness

    def __repr__(self):
        if self.kind == "AllExtended":
            return "ConnectionEvidence(AllExtended, %d)" % self.count
        return "ConnectionEvidence(%s)" % self.kind


def _disk_meets_polygon(vertices, center, r2):
    if polygon_contains(vertices, center):
        return True
    n = len(vertices)
    for e in range(n):
        d2 = dist2_point_segment(center, vertices[e], vertices[(e + 1) % n])
        if (d2 - r2).sign() <= 0:
            return True
    return False


def is_connection_point_up_to(surface, mark, cap=None,
                              node_budget=20000) -> ConnectionEvidence:
    """Check, up to `cap`, that every separatrix through a marked point
    extends to a saddle connection.

    Candidate directions come from developing the surface around the point
    and sighting every cone within the cap disk; each is verified by an exact
    trace toward the cone, then continued on the far side.  A semi-decision:
    a clean pass is evidence, never proof.
    """
    if isinstance(mark, str):
        mark = surface.mark_by_label(mark)
    mp = surface.marked[mark]
    if not surface.singular_classes:
        return ConnectionEvidence("AllExtended", 0)
    cap = scalar(cap) if cap is not None else surface.default_cap()
    cap2 = cap * cap
    p0 = mp.at

    origin = Vec2(0, 0)
    seen = {(mp.polygon, origin)}
    queue = [(mp.polygon, origin)]
    rays = set()
    nodes = 0
    while queue:
        nodes += 1
        if nodes > node_budget:
            return ConnectionEvidence("Exhausted")
        p, off = queue.pop(0)
        poly = surface.polygons[p]
        for k in range(poly.n):
            if surface.is_singular_corner((p, k)):
                d = poly.vertex(k) + off - p0
                d2 = dot(d, d)
                if d2.sign() > 0 and (d2 - cap2).sign() <= 0:
                    rays.add(canonical_direction(d))
        for e in range(poly.n):
            p2, _ = surface.partner[(p, e)]
            off2 = off - surface.translation[(p, e)]
            key = (p2, off2)
            if key in seen:
                continue
            dev = [surface.polygons[p2].vertex(t) + off2
                   for t in range(surface.polygons[p2].n)]
            if _disk_meets_polygon(dev, p0, cap2):
                seen.add(key)
                queue.append(key)

    count = 0
    for r in sorted(rays, key=lambda u: (u.x, u.y)):
        inbound = trace(surface, mp.polygon, mp.at, r, cap=cap,
                        stop_at_marked=False)
        if inbound.kind != SINGULAR:
            continue  # the leaf closes up or the sighting was on another sheet
        count += 1
        outward = trace(surface, mp.polygon, mp.at, -r, cap=cap,
                        stop_at_marked=False)
        if outward.kind != SINGULAR:
            witness = {"extension_direction": -r,
                       "separatrix_length_squared": inbound.length_squared,
                       "cap": cap}
            return ConnectionEvidence("FoundNonExtending", count, witness)
    return ConnectionEvidence("AllExtended", count)
