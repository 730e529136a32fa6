"""Surface construction: presets, gluing validation, singularities, genus.

The cone-angle values are cross-checked by an independent oracle that
identifies vertices straight from the gluing combinatorics and sums float
angles -- none of the library's exact sector machinery.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veechkit.errors import (FieldMismatch, InconsistentTopology, InvalidParams,
                             VeechkitError)
from veechkit.field import FieldScalar, scalar
from veechkit.geometry import Mat2, Vec2
from veechkit.surface import (MarkedPoint, Polygon, Surface, singularities,
                              validate)

PHI = FieldScalar(Fraction(1, 2), Fraction(1, 2), 5)


# ---------------------------------------------------------------------------
# independent singularity oracle
# ---------------------------------------------------------------------------

def oracle_cone_angles(surf):
    """Vertex classes from raw gluing data + float angle sums, in units of pi.

    A gluing (p,e)~(q,f) identifies vertex e with f+1 and e+1 with f.
    """
    parent = {}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for p, poly in enumerate(surf.polygons):
        for v in range(poly.n):
            parent[(p, v)] = (p, v)
    for (p, e), (q, f) in surf.partner.items():
        np_, nq = surf.polygons[p].n, surf.polygons[q].n
        union((p, e), (q, (f + 1) % nq))
        union((p, (e + 1) % np_), (q, f))

    sums = {}
    for p, poly in enumerate(surf.polygons):
        for v in range(poly.n):
            a = poly.vertex(v - 1) - poly.vertex(v)
            b = poly.vertex(v + 1) - poly.vertex(v)
            ang = math.atan2(float(a.y), float(a.x)) - math.atan2(float(b.y), float(b.x))
            ang %= 2 * math.pi
            sums[find((p, v))] = sums.get(find((p, v)), 0.0) + ang
    out = []
    for val in sums.values():
        mult = round(val / math.pi)
        assert abs(val - mult * math.pi) < 1e-9, "angle not a pi multiple"
        out.append(mult)
    return sorted(out)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def test_square_torus():
    t = Surface.square_torus()
    assert t.genus() == 1
    assert t.area == scalar(1)
    assert t.singular_classes == []
    assert oracle_cone_angles(t) == [2]


def test_cross_basic():
    c = Surface.cross(1, 1)
    assert c.genus() == 2
    assert c.area == scalar(5)
    angles = [2 * w for w in c.cone_windings]
    assert sorted(angles) == [2, 2, 6]
    assert len(c.singular_classes) == 1
    assert oracle_cone_angles(c) == [2, 2, 6]
    # the 6pi class has zero order 2
    rows = singularities(c)
    sing = [r for r in rows if r[1] > 2]
    assert len(sing) == 1 and sing[0][1] == 6 and sing[0][2] == 2


def test_cross_area_formula():
    for a, b in [(1, 1), (2, 1), (1, 3), (PHI, 1)]:
        c = Surface.cross(a, b)
        a_, b_ = scalar(a), scalar(b)
        assert c.area == b_ * (4 * a_ + b_)
    # golden cross: 4*phi + 1 = 3 + 2*sqrt(5)
    g = Surface.cross(PHI, 1)
    assert g.area == FieldScalar(3, 2, 5)
    assert g.genus() == 2
    assert oracle_cone_angles(g) == [2, 2, 6]


def test_l_shape():
    s = Surface.l_shape(1, 1, 1, 1)
    assert s.genus() == 2
    assert sorted(2 * w for w in s.cone_windings if w > 1) == [6]
    assert oracle_cone_angles(s) == [x for x in oracle_cone_angles(s)]  # sane
    assert s.area == scalar(3)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5), st.integers(1, 5))
def test_presets_validate_random_params(a, b, c, e):
    assert validate(*_raw(Surface.cross(Fraction(a, 2), b))) == []
    assert validate(*_raw(Surface.l_shape(a, b, c, e))) == []


def _raw(surf):
    polys = [p.vertices for p in surf.polygons]
    gluings = [(x, y) for x, y in surf.partner.items() if x <= y]
    return polys, gluings


def test_preset_invalid_params():
    with pytest.raises(InvalidParams):
        Surface.cross(0, 1)
    with pytest.raises(InvalidParams):
        Surface.l_shape(1, -1, 1, 1)


# ---------------------------------------------------------------------------
# validation as data
# ---------------------------------------------------------------------------

def test_validate_good_and_broken():
    sq = [[(0, 0), (1, 0), (1, 1), (0, 1)]]
    assert validate(sq, [((0, 0), (0, 2)), ((0, 1), (0, 3))]) == []
    out = validate(sq, [((0, 0), (0, 2))])
    assert any(v.startswith("UnmatchedEdge") for v in out)
    out = validate(sq, [((0, 0), (0, 1)), ((0, 2), (0, 3))])
    assert any(v.startswith("NonParallelGluing") for v in out)
    # clockwise polygon
    out = validate([[(0, 0), (0, 1), (1, 1), (1, 0)]], [])
    assert any(v.startswith("NotCounterclockwise") for v in out)


def test_constructor_raises_on_bad_gluings():
    sq = [[(0, 0), (1, 0), (1, 1), (0, 1)]]
    with pytest.raises(InconsistentTopology):
        Surface(sq, [((0, 0), (0, 2))])
    with pytest.raises(InconsistentTopology):
        Surface(sq, [((0, 0), (0, 1)), ((0, 2), (0, 3))])
    # two rectangles of different edge lengths
    polys = [[(0, 0), (2, 0), (2, 1), (0, 1)], [(0, 0), (1, 0), (1, 1), (0, 1)]]
    with pytest.raises(InconsistentTopology):
        Surface(polys, [((0, 0), (1, 2)), ((0, 1), (0, 3)), ((0, 2), (1, 0)),
                        ((1, 1), (1, 3))])


def test_field_mismatch_detection():
    v = FieldScalar(0, 1, 2)  # sqrt(2)
    with pytest.raises(FieldMismatch):
        Surface([[(0, 0), (1, 0), Vec2(1, v), Vec2(0, v)]],
                [((0, 0), (0, 2)), ((0, 1), (0, 3))], field_d=5)


# ---------------------------------------------------------------------------
# genus two routes
# ---------------------------------------------------------------------------

def test_genus_euler_counts():
    c = Surface.cross(1, 1)
    v = len(c.vertex_classes)
    e = len(c.partner) // 2
    f = len(c.polygons)
    assert (v, e, f) == (3, 6, 1)
    assert v - e + f == 2 - 2 * c.genus()


def test_gauss_bonnet():
    for s in (Surface.square_torus(), Surface.cross(1, 1),
              Surface.cross(PHI, 1), Surface.l_shape(1, 2, 1, 1)):
        excess = sum(w - 1 for w in s.cone_windings)
        assert excess == 2 * s.genus() - 2


# ---------------------------------------------------------------------------
# marked points
# ---------------------------------------------------------------------------

def test_mark_interior_and_label():
    t = Surface.square_torus(marked=[(0, (Fraction(1, 2), Fraction(1, 3)), "p")])
    assert len(t.marked) == 1
    mp = t.marked[0]
    assert mp.kind == "interior" and mp.label == "p"
    assert t.mark_by_label("p") == 0
    with pytest.raises(VeechkitError):
        t.mark_by_label("q")


def test_mark_on_edge_has_aliases():
    t = Surface.square_torus(marked=[(0, (Fraction(1, 2), 0), "e")])
    mp = t.marked[0]
    assert mp.kind == "edge"
    assert len(mp.aliases) == 2
    pts = sorted(str(pt) for _, pt in mp.aliases)
    assert any("1/2" in s for s in pts)


def test_mark_at_singular_vertex_rejected():
    with pytest.raises(InvalidParams):
        Surface.cross(1, 1, marked=[(0, (2, 1), "bad")])  # the 6pi cone


def test_mark_at_regular_vertex_allowed():
    t = Surface.square_torus(marked=[(0, (0, 0), "v")])
    assert t.marked[0].kind == "vertex"
    # all four corners of the square name the same point
    assert len(t.marked[0].aliases) == 4


def test_mark_outside_rejected():
    with pytest.raises(InvalidParams):
        Surface.square_torus(marked=[(0, (2, 2), "far")])


def test_point_aliases():
    t = Surface.square_torus()
    assert t.point_aliases(0, Vec2(Fraction(1, 2), Fraction(1, 2))) == \
        [(0, Vec2(Fraction(1, 2), Fraction(1, 2)))]
    edge = t.point_aliases(0, Vec2(Fraction(1, 2), 0))
    assert len(edge) == 2


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_json_round_trip():
    for s in (Surface.square_torus(marked=[(0, (Fraction(1, 2), Fraction(1, 3)), "p")]),
              Surface.cross(PHI, 1),
              Surface.l_shape(1, 2, 3, 1)):
        back = Surface.from_json(s.to_json())
        assert back == s


def test_transform_preserves_structure():
    c = Surface.cross(1, 1, marked=[(0, (Fraction(3, 2), Fraction(3, 2)), "p")])
    h = Mat2(1, 0, 1, 1)
    image = c.transform(h)
    assert image.area == c.area
    assert sorted(image.cone_windings) == sorted(c.cone_windings)
    assert image.genus() == 2
    with pytest.raises(InvalidParams):
        c.transform(Mat2(1, 0, 0, -1))
