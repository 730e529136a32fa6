"""Cylinder decompositions of a direction, splitting ratios, and twists.

Everything happens in the normalized frame: the direction is mapped to the
vertical by a determinant-one matrix, so closed leaves run straight up and
transverse measurements run straight east.  Widths, heights and ratios are
reported in that frame; ratios and moduli are frame-independent.

Bands are cut along every leaf through a distinguished point: the separatrices
of the cone points plus the closed leaves through the regular vertex classes.
A direction decomposes completely when all of those are accounted for within
the cap -- every separatrix ends at a cone point, every vertex-class leaf
either closes up or runs into a cone.  The union of these leaves is the
barrier set; each cylinder is found by shooting an east ray from a
distinguished corner to its first barrier crossing (the width), then closing
up the vertical leaf through the ray's midpoint (the height, and the
cylinder's identity key).
"""

from __future__ import annotations

from .errors import (InconsistentTopology, InvalidParams, NotComplete,
                     OnBoundaryPoint)
from .field import (FieldScalar, commensurability_classes,
                    least_common_integer_multiple, scalar)
from .geometry import (Vec2, canonical_direction, normalize_to_vertical,
                       segment_point, segments_intersect)
from .trace import (CLOSED, SINGULAR, STOPPED, Segment, advance,
                    departing_corners, trace)

_UP = Vec2(0, 1)
_EAST = Vec2(1, 0)
_WEST = Vec2(-1, 0)


class Cylinder:
    """One band of parallel closed leaves, in the normalized frame.

    width   -- transverse extent (east across the band)
    height  -- circumference of each closed leaf
    midline -- closed central leaf, as traced segments (the cylinder's key)
    west_boundary / east_boundary -- barrier ids bounding the band
    marks   -- indices of marked points strictly inside, set by decompose
    """

    __slots__ = ("index", "width", "height", "midline", "key", "sample",
                 "west_boundary", "east_boundary", "marks")

    def __init__(self, index, width, height, midline, key, sample):
        self.index = index
        self.width = width
        self.height = height
        self.midline = midline
        self.key = key
        self.sample = sample
        self.west_boundary = []
        self.east_boundary = []
        self.marks = []

    @property
    def inverse_modulus(self) -> FieldScalar:
        return self.height / self.width

    @property
    def modulus(self) -> FieldScalar:
        return self.width / self.height

    def __repr__(self):
        return "Cylinder(%d, w=%s, h=%s)" % (self.index, self.width, self.height)


class MarkPosition:
    __slots__ = ("state", "cylinder", "westd", "eastd", "ratio")

    def __init__(self, state, cylinder=None, westd=None, eastd=None, ratio=None):
        self.state = state  # 'in' or 'boundary'
        self.cylinder = cylinder
        self.westd = westd
        self.eastd = eastd
        self.ratio = ratio

    def __repr__(self):
        if self.state == "boundary":
            return "MarkPosition(boundary)"
        return "MarkPosition(cyl=%d, ratio=%s)" % (self.cylinder, self.ratio)


class Decomposition:
    """Result of decompose: either complete with cylinders, or undetermined.

    An undetermined result makes no claim about periodicity either way; it
    only records that some leaf failed to resolve within the cap.
    """

    __slots__ = ("surface", "direction", "frame", "normalized", "status",
                 "cylinders", "connections", "vertex_leaves", "barriers",
                 "marks", "cap")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def inverse_moduli(self):
        return [c.inverse_modulus for c in self.cylinders]

    # -- point location -------------------------------------------------------

    def locate_normalized(self, polygon, point) -> MarkPosition:
        """Place a normalized-frame point inside the decomposition."""
        if not self.complete:
            raise NotComplete("cannot locate points in an undetermined "
                              "decomposition")
        aliases = _aliases_of(self.normalized, polygon, point)
        for (p, pt) in aliases:
            for bs in self.barriers.get(p, []):
                if segment_point(bs.a, bs.b, pt) is not None:
                    return MarkPosition("boundary")
        eastd = self._ray(polygon, point, _EAST)
        westd = self._ray(polygon, point, _WEST)
        width = eastd + westd
        # step to the midline of the band and close it up to identify it
        delta = width / 2 - westd
        if delta.sign() > 0:
            mid = advance(self.normalized, polygon, point, _EAST, delta)
        elif delta.sign() < 0:
            mid = advance(self.normalized, polygon, point, _WEST, -delta)
        else:
            mid = (polygon, point)
        leaf = trace(self.normalized, mid[0], mid[1], _UP,
                     stop_at_marked=False, cap=self.cap)
        if leaf.kind != CLOSED:
            raise InconsistentTopology("midline leaf failed to close (%s)"
                                       % leaf.kind)
        key = _leaf_key(leaf.segments)
        for cyl in self.cylinders:
            if cyl.key == key:
                if cyl.width != width:
                    raise InconsistentTopology(
                        "band width %s disagrees with cylinder %d" %
                        (width, cyl.index))
                return MarkPosition("in", cyl.index, westd, eastd,
                                    westd / width)
        raise InconsistentTopology("point belongs to no known cylinder")

    def locate(self, polygon, point) -> MarkPosition:
        """Place an original-frame point inside the decomposition."""
        pt = point if isinstance(point, Vec2) else Vec2(*point)
        return self.locate_normalized(polygon, self.frame * pt)

    def _ray(self, polygon, point, direction):
        ev = trace(self.normalized, polygon, point, direction,
                   stop_at_marked=False, cap=self.cap, detect_closure=False,
                   stop_on=_barrier_hook(self.barriers))
        if ev.kind not in (STOPPED, SINGULAR):
            raise InconsistentTopology(
                "transverse ray escaped the decomposition (%s)" % ev.kind)
        return ev.param


def _aliases_of(surface, polygon, point):
    return surface.point_aliases(polygon, point)


def _barrier_hook(barriers):
    """stop_on hook halting a trace at its first barrier crossing."""
    def stop(seg):
        span = seg.tau1 - seg.tau0
        best = None
        for bs in barriers.get(seg.polygon, []):
            got = segments_intersect(seg.a, seg.b, bs.a, bs.b)
            if got is None:
                continue
            t = got[0]
            # the hook must skip crossings at the ray start itself
            if (seg.tau0 + t * span).sign() <= 0:
                continue
            if best is None or t < best:
                best = t
        if best is None:
            return None
        return best, None
    return stop


def _leaf_key(segments):
    """Phase-independent key for a closed leaf.

    The trace may start mid-run; merge the wrap-around split, then rotate the
    cyclic run sequence to its lexicographic minimum.
    """
    runs = [(s.polygon, s.a.x, s.a.y, s.b.x, s.b.y) for s in segments]
    if len(runs) > 1:
        p0, a0x, a0y, b0x, b0y = runs[0]
        pk, akx, aky, bkx, bky = runs[-1]
        if pk == p0 and bkx == a0x and bky == a0y:
            runs = [(p0, akx, aky, b0x, b0y)] + runs[1:-1]
    best = None
    for r in range(len(runs)):
        rot = tuple(runs[r:] + runs[:r])
        if best is None or rot < best:
            best = rot
    return best


def decompose(surface, direction, cap=None) -> Decomposition:
    """Cylinder decomposition of `direction`, or an undetermined report."""
    dirc = canonical_direction(direction if isinstance(direction, Vec2)
                               else Vec2(*direction))
    frame = normalize_to_vertical(dirc)
    normalized = surface.transform(frame)
    run_cap = scalar(cap) if cap is not None else normalized.default_cap()

    def bail(connections, vertex_leaves):
        return Decomposition(surface=surface, direction=dirc, frame=frame,
                             normalized=normalized, status="undetermined",
                             cylinders=[], connections=connections,
                             vertex_leaves=vertex_leaves, barriers=None,
                             marks=None, cap=run_cap)

    # upward separatrices from the cone points: all must be saddle connections
    connections = []
    for corner in departing_corners(normalized, _UP):
        ev = trace(normalized, corner=corner, direction=_UP,
                   stop_at_marked=False, cap=run_cap)
        connections.append((corner, ev))
        if ev.kind != SINGULAR:
            return bail(connections, [])

    # leaves through the regular vertex classes: closed ones are extra cuts;
    # ones that run into a cone already lie inside the separatrix segments
    vertex_leaves = []
    ray_corners = list(departing_corners(normalized, _EAST))
    for cls in range(len(normalized.vertex_classes)):
        if normalized.cone_windings[cls] > 1:
            continue
        p, k = normalized.vertex_classes[cls][0]
        ev = trace(normalized, p, normalized.polygons[p].vertex(k), _UP,
                   stop_at_marked=False, cap=run_cap)
        if ev.kind == CLOSED:
            vertex_leaves.append((cls, ev))
        elif ev.kind != SINGULAR:
            return bail(connections, vertex_leaves)
        ray_corners.extend(departing_corners(normalized, _EAST, cls=cls))

    barrier_events = ([ev for _, ev in connections]
                      + [ev for _, ev in vertex_leaves])
    barriers = {}
    for ev in barrier_events:
        for seg in ev.segments:
            barriers.setdefault(seg.polygon, []).append(seg)
            if seg.slide:
                # a leaf along a glued edge is a barrier in both charts
                p2, e2 = normalized.partner[(seg.polygon, seg.edge)]
                shift = normalized.translation[(seg.polygon, seg.edge)]
                twin = Segment(p2, seg.a + shift, seg.b + shift, True,
                               seg.tau0, seg.tau1, edge=e2)
                barriers.setdefault(p2, []).append(twin)

    deco = Decomposition(surface=surface, direction=dirc, frame=frame,
                         normalized=normalized, status="complete",
                         cylinders=[], connections=connections,
                         vertex_leaves=vertex_leaves, barriers=barriers,
                         marks=None, cap=run_cap)

    hook = _barrier_hook(barriers)
    seen = {}
    for corner in ray_corners:
        ev = trace(normalized, corner=corner, direction=_EAST,
                   stop_at_marked=False, cap=run_cap, stop_on=hook,
                   detect_closure=False)
        if ev.kind not in (STOPPED, SINGULAR):
            raise InconsistentTopology(
                "width ray from %s escaped the barriers (%s)"
                % (corner, ev.kind))
        width = ev.param
        mid_tau = width / 2
        seg = next(s for s in ev.segments
                   if (s.tau0 - mid_tau).sign() <= 0 <= (s.tau1 - mid_tau).sign())
        mid_p, mid_pt = seg.polygon, seg.point_at(mid_tau)
        leaf = trace(normalized, mid_p, mid_pt, _UP, stop_at_marked=False,
                     cap=run_cap)
        if leaf.kind != CLOSED:
            raise InconsistentTopology("cylinder midline failed to close (%s)"
                                       % leaf.kind)
        key = _leaf_key(leaf.segments)
        if key in seen:
            if seen[key].width != width:
                raise InconsistentTopology("two widths for one cylinder")
            continue
        cyl = Cylinder(len(deco.cylinders), width, leaf.param,
                       leaf.segments, key, (mid_p, mid_pt))
        seen[key] = cyl
        deco.cylinders.append(cyl)

    total = scalar(0)
    for cyl in deco.cylinders:
        total = total + cyl.width * cyl.height
    if total != surface.area:
        raise InconsistentTopology(
            "cylinder areas sum to %s but the surface has area %s"
            % (total, surface.area))

    _attach_banks(deco, barrier_events)
    deco.marks = []
    for i, mp in enumerate(normalized.marked):
        pos = deco.locate_normalized(mp.polygon, mp.at)
        deco.marks.append(pos)
        if pos.state == "in":
            deco.cylinders[pos.cylinder].marks.append(i)
    return deco


def _attach_banks(deco, barrier_events):
    # each barrier leaf separates two bands; find them from an interior point
    for bid, ev in enumerate(barrier_events):
        seg = ev.segments[0]
        q = seg.point_at((seg.tau0 + seg.tau1) / 2)
        for direction, attr in ((_EAST, "west_boundary"),
                                (_WEST, "east_boundary")):
            d = deco._ray(seg.polygon, q, direction)
            mid = advance(deco.normalized, seg.polygon, q, direction, d / 2)
            leaf = trace(deco.normalized, mid[0], mid[1], _UP,
                         stop_at_marked=False, cap=deco.cap)
            if leaf.kind != CLOSED:
                raise InconsistentTopology("bank leaf failed to close")
            key = _leaf_key(leaf.segments)
            for cyl in deco.cylinders:
                if cyl.key == key:
                    getattr(cyl, attr).append(bid)
                    break
            else:
                raise InconsistentTopology("bank belongs to no cylinder")


# -- signatures and classification -------------------------------------------


class TorusSignature:
    """Commensurability structure of the inverse moduli of a decomposition.

    m counts the classes; representatives holds the least common positive
    integer multiple of each class; s_prime is that single representative
    when m == 1 (the twist parameter), else None.
    """

    __slots__ = ("m", "classes", "representatives", "s_prime")

    def __init__(self, m, classes, representatives, s_prime):
        self.m = m
        self.classes = classes
        self.representatives = representatives
        self.s_prime = s_prime

    def class_of_cylinder(self, index: int) -> int:
        for j, group in enumerate(self.classes):
            if index in group:
                return j
        raise InvalidParams("no cylinder %d in this signature" % index)

    def __repr__(self):
        return "TorusSignature(m=%d, s'=%s)" % (self.m, self.s_prime)


def signature_of_moduli(inverse_moduli) -> TorusSignature:
    values = [scalar(v) for v in inverse_moduli]
    classes = commensurability_classes(values)
    reps = [least_common_integer_multiple([values[i] for i in group])
            for group in classes]
    s_prime = reps[0] if len(classes) == 1 else None
    return TorusSignature(len(classes), classes, reps, s_prime)


def torus_signature(deco: Decomposition) -> TorusSignature:
    if not deco.complete:
        raise NotComplete("signature needs a complete decomposition")
    return signature_of_moduli(deco.inverse_moduli())


class DirectionClass:
    """Outcome of classify_direction.

    kind is 'Fat', 'Parabolic', 'PeriodicMixed' or 'Undetermined'; a
    non-periodic direction is never certified, it stays Undetermined.
    The Fat certificate is (mark index, cylinder index, irrational ratio).
    """

    __slots__ = ("kind", "decomposition", "signature", "certificate")

    def __init__(self, kind, decomposition, signature=None, certificate=None):
        self.kind = kind
        self.decomposition = decomposition
        self.signature = signature
        self.certificate = certificate

    @property
    def s_prime(self):
        return self.signature.s_prime if self.signature else None

    def __repr__(self):
        extra = ""
        if self.kind == "Parabolic":
            extra = ", s'=%s" % self.s_prime
        elif self.kind == "Fat":
            extra = ", mark %d in cylinder %d, ratio %s" % self.certificate
        return "DirectionClass(%s%s)" % (self.kind, extra)


def classify_direction(surface, direction, cap=None) -> DirectionClass:
    deco = decompose(surface, direction, cap=cap)
    if not deco.complete:
        return DirectionClass("Undetermined", deco)
    sig = signature_of_moduli(deco.inverse_moduli())
    for i, mk in enumerate(deco.marks):
        if mk.state == "in" and not mk.ratio.is_rational:
            return DirectionClass("Fat", deco, signature=sig,
                                  certificate=(i, mk.cylinder, mk.ratio))
    if sig.m == 1:
        return DirectionClass("Parabolic", deco, signature=sig)
    return DirectionClass("PeriodicMixed", deco, signature=sig)


# -- twists -------------------------------------------------------------------


def twist_displacement(cyl: Cylinder, westd, n: int):
    """Leaf displacement {n*theta}*h of the n-fold twist, theta = westd/w."""
    delta = scalar(n) * westd * cyl.height / cyl.width
    _, frac = (delta / cyl.height).floor_frac()
    return frac * cyl.height


def dehn_twist_point(deco: Decomposition, polygon, point, n: int):
    """Image of an original-frame point under n twists in its own cylinder.

    The point must lie inside a cylinder of `deco` (not on a boundary leaf).
    Returns (polygon, point) in the original frame.
    """
    pt = point if isinstance(point, Vec2) else Vec2(*point)
    npt = deco.frame * pt
    pos = deco.locate_normalized(polygon, npt)
    if pos.state != "in":
        raise OnBoundaryPoint("cannot twist a point on a boundary leaf")
    cyl = deco.cylinders[pos.cylinder]
    delta = twist_displacement(cyl, pos.westd, n)
    if not delta:
        out = (polygon, npt)
    else:
        out = advance(deco.normalized, polygon, npt, _UP, delta)
    back = deco.frame.inverse()
    return out[0], back * out[1]


def twist_orbit(surface, mark, twist_direction, target_direction, n_samples,
                target_cylinder=None, cap=None):
    """Track a marked point through repeated twists in its own cylinder.

    The mark is twisted in its cylinder C of `twist_direction`; after each
    twist its splitting ratio is measured in the decomposition of
    `target_direction`, against the cylinder D = `target_cylinder` (default:
    the cylinder containing the mark, or the only one).  Samples record n,
    the position {n*theta}*h along the leaf, and the ratio in D -- or
    'missed' / 'boundary' when the image lands elsewhere.
    """
    if isinstance(mark, str):
        mark = surface.mark_by_label(mark)
    mp = surface.marked[mark]

    deco_c = decompose(surface, twist_direction, cap=cap)
    if not deco_c.complete:
        raise NotComplete("twist direction does not decompose")
    pos_c = deco_c.locate(mp.polygon, mp.at)
    if pos_c.state != "in":
        raise OnBoundaryPoint("marked point sits on a boundary leaf of the "
                              "twist direction")
    cyl_c = deco_c.cylinders[pos_c.cylinder]

    deco_d = decompose(surface, target_direction, cap=cap)
    if not deco_d.complete:
        raise NotComplete("target direction does not decompose")
    pos_d = deco_d.locate(mp.polygon, mp.at)
    if target_cylinder is None:
        if pos_d.state == "in":
            target_cylinder = pos_d.cylinder
        elif len(deco_d.cylinders) == 1:
            target_cylinder = 0
        else:
            raise OnBoundaryPoint(
                "marked point sits on a boundary leaf of the target "
                "direction; pass target_cylinder explicitly")
    cyl_d = deco_d.cylinders[target_cylinder]

    npt = deco_c.frame * mp.at
    back = deco_c.frame.inverse()
    samples = []
    for n in range(1, n_samples + 1):
        delta = twist_displacement(cyl_c, pos_c.westd, n)
        if not delta:
            out = (mp.polygon, npt)
        else:
            out = advance(deco_c.normalized, mp.polygon, npt, _UP, delta)
        op, opt = out[0], back * out[1]
        spot = deco_d.locate(op, opt)
        if spot.state == "boundary":
            samples.append({"n": n, "position": delta, "state": "boundary",
                            "ratio": None})
        elif spot.cylinder != cyl_d.index:
            samples.append({"n": n, "position": delta, "state": "missed",
                            "ratio": None})
        else:
            samples.append({"n": n, "position": delta, "state": "ratio",
                            "ratio": spot.ratio})
    report = {
        "mark": mark,
        "theta": pos_c.ratio,
        "twist_cylinder": cyl_c,
        "target_cylinder": cyl_d,
        "start": pos_d,
        "nu": cyl_d.width / cyl_c.height,
        "lambda": cyl_d.width,
        "y0": pos_d.westd if pos_d.state == "in" else scalar(0),
    }
    return report, samples


def mark_ratios(surface, direction, cap=None):
    """Splitting ratio of every marked point in `direction`'s decomposition."""
    deco = decompose(surface, direction, cap=cap)
    if not deco.complete:
        raise NotComplete("direction does not decompose within the cap")
    return [(mk.state, mk.ratio) for mk in deco.marks]
