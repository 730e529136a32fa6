"""Cylinder decompositions, commensurability signatures, and twists.

Frozen values below (cylinder dimensions, twist images, orbit ratios) were
computed by hand from the flat pictures before being locked in here.
"""

from fractions import Fraction

import pytest

from veechkit.errors import NotComplete, OnBoundaryPoint
from veechkit.field import FieldScalar, scalar
from veechkit.geometry import Mat2, Vec2
from veechkit.linear import twist_matrix
from veechkit.surface import Surface
from veechkit.cylinders import (classify_direction, decompose,
                                dehn_twist_point, mark_ratios,
                                signature_of_moduli, torus_signature,
                                twist_displacement, twist_orbit)

GOLDEN = FieldScalar(Fraction(-1, 2), Fraction(1, 2), 5)
SQRT5 = FieldScalar(0, 1, 5)


def dims(deco):
    return sorted((cyl.width, cyl.height) for cyl in deco.cylinders)


# ---------------------------------------------------------------------------
# decompositions of the presets
# ---------------------------------------------------------------------------

def test_torus_both_axes():
    t = Surface.square_torus()
    for d in (Vec2(1, 0), Vec2(0, 1)):
        deco = decompose(t, d)
        assert deco.complete
        assert dims(deco) == [(scalar(1), scalar(1))]
        assert torus_signature(deco).s_prime == scalar(1)


def test_cross_axes():
    c = Surface.cross(1, 1)
    for d in (Vec2(1, 0), Vec2(0, 1)):
        deco = decompose(c, d)
        assert deco.complete
        assert dims(deco) == [(scalar(1), scalar(1)), (scalar(1), scalar(1)),
                              (scalar(1), scalar(3))]
        assert sorted(deco.inverse_moduli()) == [1, 1, 3]
        sig = torus_signature(deco)
        assert sig.m == 1
        assert sig.s_prime == scalar(3)


def test_cross_diagonal():
    c = Surface.cross(1, 1)
    deco = decompose(c, Vec2(1, 1))
    assert len(deco.cylinders) == 1
    cyl = deco.cylinders[0]
    # lengths in units of the direction vector
    assert (cyl.width, cyl.height) == (scalar(1), scalar(5))
    assert torus_signature(deco).s_prime == scalar(5)


def test_cross_two_three():
    c = Surface.cross(1, 1)
    for d in (Vec2(2, 3), Vec2(3, 2)):
        deco = decompose(c, d)
        assert sorted(deco.inverse_moduli()) == [1, 2, 2]
        assert torus_signature(deco).s_prime == scalar(2)


def test_area_identity():
    for surf in (Surface.square_torus(), Surface.cross(1, 1),
                 Surface.cross(GOLDEN, 1), Surface.l_shape(1, 1, 1, 1)):
        for d in (Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)):
            deco = decompose(surf, d)
            if not deco.complete:
                continue
            total = scalar(0)
            for cyl in deco.cylinders:
                total = total + cyl.width * cyl.height
            assert total == surf.area


def test_banks_are_attached():
    deco = decompose(Surface.cross(1, 1), Vec2(1, 0))
    for cyl in deco.cylinders:
        assert cyl.west_boundary and cyl.east_boundary


def test_incomplete_direction_stays_open():
    deco = decompose(Surface.cross(1, 1), Vec2(scalar(1), GOLDEN), cap=8)
    assert not deco.complete
    assert deco.status == "undetermined"
    with pytest.raises(NotComplete):
        torus_signature(deco)


# ---------------------------------------------------------------------------
# locating points
# ---------------------------------------------------------------------------

def test_locate_center():
    deco = decompose(Surface.cross(1, 1), Vec2(1, 0))
    pos = deco.locate(0, Vec2(Fraction(3, 2), Fraction(3, 2)))
    assert pos.state == "in"
    assert deco.cylinders[pos.cylinder].height == scalar(3)
    assert pos.ratio == scalar(Fraction(1, 2))
    assert pos.westd + pos.eastd == deco.cylinders[pos.cylinder].width


def test_locate_boundary_leaf():
    deco = decompose(Surface.cross(1, 1), Vec2(1, 0))
    pos = deco.locate(0, Vec2(Fraction(3, 2), 1))
    assert pos.state == "boundary"


def test_marks_located_by_decompose():
    c = Surface.cross(1, 1, marked=[(0, (GOLDEN, Fraction(3, 2)), "q")])
    horiz = decompose(c, Vec2(1, 0))
    assert [(m.state, m.ratio) for m in horiz.marks] == [
        ("in", scalar(Fraction(1, 2)))]
    vert = decompose(c, Vec2(0, 1))
    (mk,) = vert.marks
    assert (mk.state, mk.ratio) == ("in", GOLDEN)


# ---------------------------------------------------------------------------
# signatures and classification
# ---------------------------------------------------------------------------

def test_signature_of_moduli():
    sig = signature_of_moduli([scalar(1), SQRT5])
    assert sig.m == 2 and sig.s_prime is None
    assert sorted(len(g) for g in sig.classes) == [1, 1]
    sig2 = signature_of_moduli([scalar(Fraction(2, 3)), scalar(Fraction(1, 2))])
    assert sig2.m == 1 and sig2.s_prime == scalar(2)
    assert sig2.class_of_cylinder(0) == sig2.class_of_cylinder(1)


def test_classify_parabolic():
    cls = classify_direction(Surface.cross(1, 1), Vec2(1, 0))
    assert cls.kind == "Parabolic"
    assert cls.s_prime == scalar(3)
    assert cls.certificate is None


def test_classify_fat():
    c = Surface.cross(1, 1, marked=[(0, (GOLDEN, Fraction(3, 2)), "q")])
    cls = classify_direction(c, Vec2(0, 1))
    assert cls.kind == "Fat"
    mark_idx, cyl_idx, ratio = cls.certificate
    assert mark_idx == 0
    assert ratio == GOLDEN
    assert not ratio.is_rational


def test_classify_rational_mark_stays_parabolic():
    c = Surface.cross(1, 1, marked=[(0, (GOLDEN, Fraction(3, 2)), "q")])
    cls = classify_direction(c, Vec2(1, 0))
    assert cls.kind == "Parabolic"  # ratio 1/2 is rational


def test_classify_undetermined():
    cls = classify_direction(Surface.cross(1, 1), Vec2(scalar(1), GOLDEN), cap=8)
    assert cls.kind == "Undetermined"
    assert cls.s_prime is None


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------

def test_twist_displacement_wraps():
    deco = decompose(Surface.square_torus(), Vec2(1, 0))
    cyl = deco.cylinders[0]
    assert twist_displacement(cyl, GOLDEN, 1) == GOLDEN
    assert twist_displacement(cyl, GOLDEN, 2) == FieldScalar(-2, 1, 5)
    assert twist_displacement(cyl, scalar(Fraction(1, 2)), 2) == scalar(0)


def test_dehn_twist_point_torus():
    deco = decompose(Surface.square_torus(), Vec2(1, 0))
    start = Vec2(Fraction(1, 4), Fraction(1, 3))
    assert dehn_twist_point(deco, 0, start, 0) == (0, start)
    assert dehn_twist_point(deco, 0, start, 2) == (
        0, Vec2(Fraction(7, 12), Fraction(1, 3)))
    with pytest.raises(OnBoundaryPoint):
        dehn_twist_point(deco, 0, Vec2(Fraction(1, 4), 0), 1)


def test_twist_periodicity_matches_transverse_ratio():
    # a point at rational transverse ratio p/q returns home after q twists;
    # an irrational ratio never does
    c = Surface.cross(1, 1)
    deco = decompose(c, Vec2(1, 0))
    for pt in (Vec2(Fraction(3, 2), Fraction(3, 2)),
               Vec2(Fraction(5, 4), Fraction(1, 2))):
        pos = deco.locate(0, pt)
        q = (pos.westd / deco.cylinders[pos.cylinder].width
             ).as_fraction().denominator
        assert dehn_twist_point(deco, 0, pt, q) == (0, pt)
        assert dehn_twist_point(deco, 0, pt, 1) != (0, pt)
    wild = Vec2(Fraction(3, 2), scalar(1) + GOLDEN)
    images = {dehn_twist_point(deco, 0, wild, n) for n in range(7)}
    assert len(images) == 7  # irrational ratio: orbit never repeats


def test_mark_ratio_invariant_under_shear():
    c = Surface.cross(1, 1, marked=[(0, (GOLDEN, Fraction(3, 2)), "q")])
    a = twist_matrix(Vec2(1, 0), 3)
    image = c.transform(a)
    for d in (Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)):
        assert mark_ratios(c, d) == mark_ratios(image, a * d)


def test_twist_orbit_torus():
    t = Surface.square_torus(marked=[(0, (GOLDEN, 0), "p")])
    report, samples = twist_orbit(t, "p", Vec2(0, 1), Vec2(1, 0), 6)
    assert report["theta"] == GOLDEN
    assert report["y0"] == scalar(0)
    assert report["start"].state == "boundary"
    assert [s["state"] for s in samples] == ["ratio"] * 6
    ratios = [s["ratio"] for s in samples]
    assert ratios[0] == scalar(1) - GOLDEN
    assert all(not r.is_rational for r in ratios)
    assert len(set(ratios)) == 6
    # position of sample n is the fractional part of n*theta
    for s in samples:
        _, frac = (scalar(s["n"]) * GOLDEN).floor_frac()
        assert s["position"] == frac


def test_twist_orbit_cross():
    c = Surface.cross(1, 1, marked=[(0, (GOLDEN, Fraction(3, 2)), "q")])
    report, samples = twist_orbit(c, "q", Vec2(0, 1), Vec2(1, 0), 6)
    assert report["theta"] == GOLDEN
    assert report["start"].state == "in"
    assert report["target_cylinder"].height == scalar(3)
    assert report["twist_cylinder"].height == scalar(1)
    assert [s["state"] for s in samples] == ["ratio"] * 6
    ratios = [s["ratio"] for s in samples]
    assert ratios[0] == FieldScalar(2, Fraction(-1, 2), 5)
    assert all(not r.is_rational for r in ratios)
    assert len(set(ratios)) == 6


def test_twist_orbit_rejects_boundary_start():
    c = Surface.cross(1, 1, marked=[(0, (1, Fraction(3, 2)), "edge")])
    with pytest.raises(OnBoundaryPoint):
        twist_orbit(c, "edge", Vec2(0, 1), Vec2(1, 0), 3)
