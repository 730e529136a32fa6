"""Ramified coverings built by slitting a surface and regluing sheet copies.

A slit is a straight segment on the surface (given by a start, a direction and
an end point; trace-resolved into per-chart runs).  The covering takes d
copies of the base, cuts every copy open along each slit, and reglues the left
bank on sheet i to the right bank on sheet sigma(i).  Cutting is exact polygon
surgery: chart chords are extended to full polygon chords (the extra pieces
are seamed back together), polygon boundaries are split at every chord foot,
and each polygon is subdivided along its chords.  The result is an ordinary
polygons-plus-gluings surface, so every analysis in the package applies to it
unchanged.

Slit endpoints become branch points.  A preimage with total angle above 2pi is
a cone point of the cover and keeps its base label (if any) in point_labels; a
preimage left regular stays an ordinary labelled point.
"""

from __future__ import annotations

import itertools

from .errors import (InconsistentProfile, InvalidParams, NonTransitive,
                     OverlappingSlits, SlitThroughSingularity)
from .field import scalar
from .geometry import (Vec2, canonical_direction, cross, dot, parallel,
                       segment_point, segments_intersect)
from .surface import Polygon, Surface
from .trace import CLOSED, MARKED, SINGULAR, STOPPED, _exit_solve, trace


class Slit:
    """Straight cut from `start` to `end`, resolved by tracing `direction`.

    `corner` (a (polygon, vertex) pair) is required when the start is a cone
    point, to pick which of the coinciding sectors the slit leaves through.
    """

    __slots__ = ("polygon", "start", "direction", "to_polygon", "end",
                 "corner")

    def __init__(self, polygon=None, start=None, direction=None,
                 to_polygon=None, end=None, corner=None):
        self.corner = tuple(corner) if corner is not None else None
        if self.corner is not None:
            self.polygon = self.corner[0]
            self.start = None
        else:
            if polygon is None or start is None:
                raise InvalidParams("slit needs a start point or a corner")
            self.polygon = polygon
            self.start = start if isinstance(start, Vec2) else Vec2(*start)
        if direction is None or end is None:
            raise InvalidParams("slit needs a direction and an end point")
        self.direction = (direction if isinstance(direction, Vec2)
                          else Vec2(*direction))
        if self.direction.is_zero():
            raise InvalidParams("slit direction must be nonzero")
        self.to_polygon = self.polygon if to_polygon is None else to_polygon
        self.end = end if isinstance(end, Vec2) else Vec2(*end)

    def start_point(self, base: Surface):
        if self.corner is not None:
            p, k = self.corner
            return p, base.polygons[p].vertex(k)
        return self.polygon, self.start

    def to_json(self) -> dict:
        obj = {"dir": self.direction.to_json(),
               "to": self.end.to_json(), "to_polygon": self.to_polygon}
        if self.corner is not None:
            obj["corner"] = list(self.corner)
        else:
            obj["polygon"] = self.polygon
            obj["from"] = self.start.to_json()
        return obj

    @classmethod
    def from_json(cls, obj) -> "Slit":
        return cls(polygon=obj.get("polygon"),
                   start=Vec2.from_json(obj["from"]) if "from" in obj else None,
                   direction=Vec2.from_json(obj["dir"]),
                   to_polygon=obj.get("to_polygon"),
                   end=Vec2.from_json(obj["to"]),
                   corner=obj.get("corner"))


class CoverSpec:
    """Degree, slits, and one sheet permutation per slit (0-based inside;
    JSON carries the 1-based form)."""

    __slots__ = ("base", "degree", "slits", "perms")

    def __init__(self, base, degree, slits, perms):
        self.base = base
        self.degree = int(degree)
        self.slits = list(slits)
        self.perms = [tuple(p) for p in perms]
        if self.degree < 2:
            raise InvalidParams("covering degree must be at least 2")
        if len(self.perms) != len(self.slits):
            raise InvalidParams("need exactly one permutation per slit")
        for p in self.perms:
            if sorted(p) != list(range(self.degree)):
                raise InvalidParams("%r is not a permutation of 0..%d"
                                    % (p, self.degree - 1))

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "slits": [s.to_json() for s in self.slits],
                "perms": [[i + 1 for i in p] for p in self.perms]}

    @classmethod
    def from_json(cls, obj, base) -> "CoverSpec":
        perms = [[i - 1 for i in p] for p in obj["perms"]]
        return cls(base, obj["degree"],
                   [Slit.from_json(s) for s in obj["slits"]], perms)


# -- slit resolution ----------------------------------------------------------


class _Endpoint:
    __slots__ = ("polygon", "at", "aliases", "singular", "label")

    def __init__(self, base, polygon, at):
        self.polygon = polygon
        self.at = at
        self.aliases = base.point_aliases(polygon, at)
        where = base.polygons[polygon].locate(at)
        self.singular = (isinstance(where, tuple) and where[0] == "vertex"
                         and base.cone_windings[
                             base.class_of[(polygon, where[1])]] > 1)
        self.label = None
        canon = self.aliases[0]
        for mp in base.marked:
            if mp.aliases[0] == canon:
                self.label = mp.label


class _ResolvedSlit:
    __slots__ = ("runs", "u", "v", "direction")

    def __init__(self, runs, u, v, direction):
        self.runs = runs
        self.u = u
        self.v = v
        self.direction = direction


def _resolve_slit(base: Surface, slit: Slit) -> _ResolvedSlit:
    sp, spt = slit.start_point(base)
    u = _Endpoint(base, sp, spt)
    v = _Endpoint(base, slit.to_polygon, slit.end)
    targets = v.aliases

    def hook(seg):
        best = None
        for (pa, pt) in targets:
            if pa != seg.polygon:
                continue
            t = segment_point(seg.a, seg.b, pt)
            if t is not None and (best is None or t < best):
                best = t
        return None if best is None else (best, "target")

    if slit.corner is not None:
        ev = trace(base, corner=slit.corner, direction=slit.direction,
                   stop_on=hook)
    else:
        ev = trace(base, sp, spt, slit.direction, stop_on=hook)
    if ev.kind == SINGULAR:
        arrival = (ev.segments[-1].polygon, ev.segments[-1].b)
        if arrival not in targets:
            raise SlitThroughSingularity(
                "slit from %s hits a cone point at %s before its end"
                % (spt, arrival[1]))
    elif ev.kind == MARKED:
        raise InvalidParams("slit interior passes through marked point %d"
                            % ev.mark)
    elif ev.kind == CLOSED:
        raise InvalidParams("slit returns to its own start")
    elif ev.kind != STOPPED:
        raise InvalidParams("slit endpoints are not joined by direction %s "
                            "within the cap" % slit.direction)
    return _ResolvedSlit(ev.segments, u, v, slit.direction)


def _check_disjoint(resolved):
    """Slits must not touch each other or revisit themselves."""
    def clash(s1, s2):
        if s1.polygon != s2.polygon:
            return False
        got = segments_intersect(s1.a, s1.b, s2.a, s2.b)
        if got is not None:
            return True
        e1 = s1.b - s1.a
        if not parallel(e1, s2.b - s2.a) or cross(e1, s2.a - s1.a):
            return False
        lo1, hi1 = sorted([dot(e1, s1.a), dot(e1, s1.b)])
        lo2, hi2 = sorted([dot(e1, s2.a), dot(e1, s2.b)])
        return max(lo1, lo2) <= min(hi1, hi2)

    for i, rs in enumerate(resolved):
        for t, u in itertools.combinations(range(len(rs.runs)), 2):
            if u == t + 1:
                continue
            if clash(rs.runs[t], rs.runs[u]):
                raise OverlappingSlits("slit %d crosses itself" % i)
        for j in range(i + 1, len(resolved)):
            for a in rs.runs:
                for b in resolved[j].runs:
                    if clash(a, b):
                        raise OverlappingSlits(
                            "slits %d and %d are not disjoint" % (i, j))


# -- the cut complex ----------------------------------------------------------


class _Complex:
    """One mutable copy of the base, cut open along the slits."""

    def __init__(self, base: Surface):
        self.polys = [list(p.vertices) for p in base.polygons]
        self.glue = dict(base.partner)
        self.bank = {}  # (slit, piece, 'L'/'R') -> (polygon, edge)
        self.ancestor = list(range(len(self.polys)))

    def find_edge(self, p, a, b):
        verts = self.polys[p]
        n = len(verts)
        for e in range(n):
            if verts[e] == a and verts[(e + 1) % n] == b:
                return e
        raise InvalidParams("no edge %s -> %s in polygon %d" % (a, b, p))

    def _shift_edges(self, moved):
        """Re-key glue and bank maps after edges moved; `moved` maps old
        (p, e) keys to new ones and leaves absent keys alone."""
        self.glue = {moved.get(k, k): moved.get(w, w)
                     for k, w in self.glue.items()}
        self.bank = {k: moved.get(w, w) for k, w in self.bank.items()}

    def ensure_vertex(self, p, pt):
        """Make pt a vertex of polygon p (splitting an edge if needed)."""
        where = Polygon(self.polys[p]).locate(pt)
        if where == "outside":
            raise InvalidParams("cut point %s fell outside polygon %d"
                                % (pt, p))
        if where == "interior":
            raise InvalidParams("cut point %s is not on the boundary of "
                                "polygon %d" % (pt, p))
        if where[0] == "vertex":
            return
        e = where[1]
        if (p, e) not in self.glue:
            raise InvalidParams("cut lands on a slit bank; such slit "
                                "arrangements are not supported")
        p2, e2 = self.glue[(p, e)]
        a = self.polys[p][e]
        d_end = self.polys[p2][(e2 + 1) % len(self.polys[p2])]
        pt2 = pt + (d_end - a)
        del self.glue[(p, e)]
        del self.glue[(p2, e2)]
        # insert the higher-index vertex first so indices stay valid
        inserts = sorted([(p, e, pt), (p2, e2, pt2)],
                         key=lambda q: (q[0], q[1]), reverse=True)
        for (pp, ee, mm) in inserts:
            self.polys[pp].insert(ee + 1, mm)

        def bump(pp, ee):
            return ee + sum(1 for (qq, ss, _) in inserts
                            if qq == pp and ss < ee)

        moved = {}
        for key in list(self.glue) + list(self.bank.values()):
            nk = (key[0], bump(*key))
            if nk != key:
                moved[key] = nk
        self._shift_edges(moved)
        ea, eb = bump(p, e), bump(p2, e2)
        self.glue[(p, ea)] = (p2, eb + 1)
        self.glue[(p2, eb + 1)] = (p, ea)
        self.glue[(p, ea + 1)] = (p2, eb)
        self.glue[(p2, eb)] = (p, ea + 1)

    def tag_slide(self, p, a, b, slit, piece):
        """A slit running along a glued edge: the slide chart is the left
        bank (its interior sits left of the travel direction)."""
        self.ensure_vertex(p, a)
        self.ensure_vertex(p, b)
        e = self.find_edge(p, a, b)
        other = self.glue.pop((p, e))
        del self.glue[other]
        self.bank[(slit, piece, "L")] = (p, e)
        self.bank[(slit, piece, "R")] = other

    def cut(self, p, pts, tags):
        """Split polygon p along the chord pts[0] -> pts[-1] (both already
        vertices); tags[t] describes piece pts[t] -> pts[t+1]: None for a
        seam (reglued at once) or (slit, piece, forward)."""
        verts = self.polys[p]
        n = len(verts)
        i = next(t for t in range(n) if verts[t] == pts[0])
        j = next(t for t in range(n) if verts[t] == pts[-1])
        k = len(pts) - 1
        arc_a = (j - i) % n
        arc_b = (i - j) % n
        if arc_a + k < 3 or arc_b + k < 3:
            raise InvalidParams("cut would create a degenerate polygon")
        piece_a = [verts[(i + t) % n] for t in range(arc_a + 1)]
        piece_a += pts[-2:0:-1]
        piece_b = [verts[(j + t) % n] for t in range(arc_b + 1)]
        piece_b += pts[1:-1]
        pb = len(self.polys)
        self.polys[p] = piece_a
        self.polys.append(piece_b)
        self.ancestor.append(self.ancestor[p])
        moved = {}
        for t in range(arc_a):
            moved[(p, (i + t) % n)] = (p, t)
        for t in range(arc_b):
            moved[(p, (j + t) % n)] = (pb, t)
        self._shift_edges(moved)
        for t, tag in enumerate(tags):
            fwd = (pb, arc_b + t)
            rev = (p, arc_a + (k - 1 - t))
            if tag is None:
                self.glue[fwd] = rev
                self.glue[rev] = fwd
            else:
                slit, piece, forward = tag
                if forward:
                    self.bank[(slit, piece, "L")] = fwd
                    self.bank[(slit, piece, "R")] = rev
                else:
                    self.bank[(slit, piece, "L")] = rev
                    self.bank[(slit, piece, "R")] = fwd
        return pb


# -- chord assembly -----------------------------------------------------------


def _chart_chords(base, resolved):
    """Raw cut pieces per chart: slit runs plus boundary extensions for
    interior endpoints, then collinear pieces merged into full chords."""
    raw = []  # (polygon, A, B, tag); tag None=seam / (slit, piece, dir)
    slides = []
    for j, rs in enumerate(resolved):
        piece = 0
        for seg in rs.runs:
            if seg.slide:
                slides.append((seg.polygon, seg.a, seg.b, j, piece))
            else:
                raw.append((seg.polygon, seg.a, seg.b,
                            (j, piece, rs.direction)))
            piece += 1
        first, last = rs.runs[0], rs.runs[-1]
        if not first.slide and \
                base.polygons[first.polygon].locate(first.a) == "interior":
            t, y, _, _ = _exit_solve(base, first.polygon, first.a,
                                     -rs.direction)
            raw.append((first.polygon, y, first.a, None))
        if not last.slide and \
                base.polygons[last.polygon].locate(last.b) == "interior":
            t, y, _, _ = _exit_solve(base, last.polygon, last.b, rs.direction)
            raw.append((last.polygon, last.b, y, None))

    groups = {}
    for (p, a, b, tag) in raw:
        dirc = canonical_direction(b - a)
        key = (p, dirc.x, dirc.y, cross(dirc, a))
        s0, s1 = dot(dirc, a), dot(dirc, b)
        if s1 < s0:
            s0, s1, a, b = s1, s0, b, a
        groups.setdefault(key, []).append((s0, s1, a, b, tag))

    chords = []
    for (p, dx, dy, _), pieces in groups.items():
        dirc = Vec2(dx, dy)
        pieces.sort(key=lambda q: (q[0], q[1]))
        comp, reach = [], None
        for piece in pieces:
            if comp and (piece[0] - reach).sign() > 0:
                chords.append(_finish_chord(p, dirc, comp))
                comp, reach = [], None
            comp.append(piece)
            if reach is None or (piece[1] - reach).sign() > 0:
                reach = piece[1]
        if comp:
            chords.append(_finish_chord(p, dirc, comp))
    return chords, slides


def _finish_chord(p, dirc, comp):
    points = {}
    for (s0, s1, a, b, _) in comp:
        points[s0] = a
        points[s1] = b
    svals = sorted(points)
    pts = [points[s] for s in svals]
    tags = []
    for t in range(len(svals) - 1):
        mid = (svals[t] + svals[t + 1]) / 2
        owners = [tag for (s0, s1, _, _, tag) in comp
                  if tag is not None and s0 < mid < s1]
        if len(owners) > 1:
            raise OverlappingSlits("two slits share the segment near %s"
                                   % pts[t])
        if owners:
            j, piece, slit_dir = owners[0]
            tags.append((j, piece, dot(slit_dir, dirc).sign() > 0))
        else:
            assert any(s0 < mid < s1 for (s0, s1, _, _, _) in comp)
            tags.append(None)
    return {"polygon": p, "pts": pts, "tags": tags}


# -- building the cover -------------------------------------------------------


def build_cover(spec: CoverSpec) -> Surface:
    """d sheet copies of the base, cut along the slits and cross-glued."""
    base = spec.base
    resolved = [_resolve_slit(base, s) for s in spec.slits]
    _check_disjoint(resolved)
    piece_counts = [len(rs.runs) for rs in resolved]

    cx = _Complex(base)
    chords, slides = _chart_chords(base, resolved)
    # the cutter handles parallel systems only: two chords of one chart may
    # meet at a shared foot, never at a point interior to either
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            a, b = chords[i], chords[j]
            if a["polygon"] != b["polygon"]:
                continue
            a0, a1 = a["pts"][0], a["pts"][-1]
            b0, b1 = b["pts"][0], b["pts"][-1]
            if segments_intersect(a0, a1, b0, b1) and not (
                    a0 in (b0, b1) or a1 in (b0, b1)):
                raise InvalidParams(
                    "slit system needs crossing cuts in chart %d (seam "
                    "extensions included); only non-crossing systems build"
                    % a["polygon"])
    for ch in chords:
        cx.ensure_vertex(ch["polygon"], ch["pts"][0])
        cx.ensure_vertex(ch["polygon"], ch["pts"][-1])
    for (p, a, b, j, piece) in slides:
        cx.tag_slide(p, a, b, j, piece)
    work = list(chords)
    while work:
        ch = work.pop(0)
        p = ch["polygon"]
        pb = cx.cut(p, ch["pts"], ch["tags"])
        half = scalar(1) / 2
        for other in work:
            if other["polygon"] != p:
                continue
            mid = (other["pts"][0] + other["pts"][-1]) * half
            if Polygon(cx.polys[p]).locate(mid) == "outside":
                other["polygon"] = pb
    for j, cnt in enumerate(piece_counts):
        for piece in range(cnt):
            assert (j, piece, "L") in cx.bank and (j, piece, "R") in cx.bank

    d = spec.degree
    P = len(cx.polys)
    polys = [list(v) for _ in range(d) for v in cx.polys]
    glue_pairs = set()
    for copy in range(d):
        off = copy * P
        for (pe, pe2) in cx.glue.items():
            a = (pe[0] + off, pe[1])
            b = (pe2[0] + off, pe2[1])
            glue_pairs.add((a, b) if a <= b else (b, a))
    for j, perm in enumerate(spec.perms):
        for piece in range(piece_counts[j]):
            lp, le = cx.bank[(j, piece, "L")]
            rp, re = cx.bank[(j, piece, "R")]
            for i in range(d):
                a = (lp + i * P, le)
                b = (rp + perm[i] * P, re)
                glue_pairs.add((a, b) if a <= b else (b, a))

    endpoints = [ep for rs in resolved for ep in (rs.u, rs.v)]
    marks = []
    for mp in base.marked:
        if any(mp.aliases[0] == ep.aliases[0] for ep in endpoints):
            continue
        home = next(q for q in range(P)
                    if cx.ancestor[q] == mp.polygon
                    and Polygon(cx.polys[q]).locate(mp.at) != "outside")
        for copy in range(d):
            marks.append((home + copy * P, mp.at,
                          "%s#%d" % (mp.label, copy + 1)))

    built = Surface(polys, sorted(glue_pairs), marked=marks)
    labels = {}
    extra_marks = []
    for ep in endpoints:
        if ep.label is None or ep.singular:
            continue
        classes = {}
        for q in range(P):
            for (bp, pt) in ep.aliases:
                if cx.ancestor[q] != bp:
                    continue
                for kq, vv in enumerate(cx.polys[q]):
                    if vv == pt:
                        for copy in range(d):
                            c = built.class_of[(q + copy * P, kq)]
                            classes.setdefault(c, (q + copy * P, pt))
        for t, (c, (pq, pt)) in enumerate(sorted(classes.items())):
            if built.cone_windings[c] > 1:
                labels[c] = ep.label
            else:
                suffix = "#%d" % (t + 1) if len(classes) > 1 else ""
                extra_marks.append((pq, pt, ep.label + suffix))
    if labels or extra_marks:
        built = Surface(polys, sorted(glue_pairs), marked=marks + extra_marks,
                        point_labels=labels)
    return built


def cyclic_slit_cover(spec: CoverSpec) -> Surface:
    """Cover with a single slit whose sheets are permuted by one d-cycle;
    both slit endpoints are totally ramified."""
    if len(spec.slits) != 1:
        raise InvalidParams("cyclic construction takes exactly one slit")
    perm = spec.perms[0]
    seen, at = set(), 0
    while at not in seen:
        seen.add(at)
        at = perm[at]
    if len(seen) != spec.degree:
        raise NonTransitive("%r does not act transitively on the sheets"
                            % (perm,))
    return build_cover(spec)


def double_cover(base: Surface, slits) -> Surface:
    """Two sheets exchanged across every slit; 2k slits give genus
    3 + 2k over a genus-two base."""
    slits = list(slits)
    if len(slits) < 2 or len(slits) % 2:
        raise InvalidParams("double cover wants 2k slits with k >= 1")
    spec = CoverSpec(base, 2, slits, [(1, 0)] * len(slits))
    return build_cover(spec)


def riemann_hurwitz(g_base: int, degree: int, profile) -> int:
    """Genus of a degree-d cover of a genus-g surface with the given
    ramification profile: chi = d(2 - 2g) - sum(e - 1)."""
    seen = set()
    defect = 0
    for point, partition in profile:
        if point in seen:
            raise InconsistentProfile("branch point %r listed twice" % (point,))
        seen.add(point)
        parts = list(partition)
        if sum(parts) != degree or any(e < 1 for e in parts):
            raise InconsistentProfile(
                "%r is not a partition of %d" % (parts, degree))
        defect += sum(e - 1 for e in parts)
    chi = degree * (2 - 2 * g_base) - defect
    if chi % 2:
        raise InconsistentProfile("profile gives odd Euler characteristic %d"
                                  % chi)
    return (2 - chi) // 2


def is_balanced(cover: Surface, spec: CoverSpec) -> bool:
    """True when every preimage of every nonsingular branch point is
    ramified, i.e. no sheet permutation fixes a sheet over such a point."""
    for slit, perm in zip(spec.slits, spec.perms):
        sp, spt = slit.start_point(spec.base)
        for (p, pt) in ((sp, spt), (slit.to_polygon, slit.end)):
            ep = _Endpoint(spec.base, p, pt)
            if ep.singular:
                continue
            if any(perm[i] == i for i in range(spec.degree)):
                return False
    return True
