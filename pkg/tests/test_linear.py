"""The SL(2) action: named flows, direction normalization, parabolic checks."""

import random
from fractions import Fraction

import pytest

from veechkit.cylinders import decompose
from veechkit.errors import NonPositive, NotParabolicMatrix
from veechkit.field import FieldScalar, scalar
from veechkit.geometry import (Mat2, Vec2, boundary_point, canonical_direction,
                               geodesic_matrix, horocycle_matrix,
                               normalize_to_vertical, parallel)
from veechkit.linear import is_parabolic_fixing, twist_matrix
from veechkit.surface import Surface


def test_horocycle_group():
    assert horocycle_matrix(0) == Mat2.identity()
    h1, h2 = horocycle_matrix(1), horocycle_matrix(2)
    assert h1 * h2 == horocycle_matrix(3)
    assert h1 * Vec2(0, 1) == Vec2(0, 1)


def test_geodesic_matrix():
    assert geodesic_matrix(1) == Mat2.identity()
    g2, g3 = geodesic_matrix(2), geodesic_matrix(3)
    assert g2 * g3 == geodesic_matrix(6)
    with pytest.raises(NonPositive):
        geodesic_matrix(0)
    with pytest.raises(NonPositive):
        geodesic_matrix(-2)


def test_geodesic_rescales_vertical_cylinder():
    # diag(2, 1/2) turns the (1,1) vertical cylinder into (2, 1/2)
    t = Surface.square_torus().transform(geodesic_matrix(2))
    deco = decompose(t, (0, 1))
    assert deco.complete and len(deco.cylinders) == 1
    cyl = deco.cylinders[0]
    assert (cyl.width, cyl.height) == (scalar(2), scalar(Fraction(1, 2)))


def test_normalize_to_vertical_examples():
    assert normalize_to_vertical(Vec2(0, 1)) == Mat2.identity()
    a = normalize_to_vertical(Vec2(1, 0))
    assert a * Vec2(1, 0) == Vec2(0, 1)
    a = normalize_to_vertical(Vec2(1, 2))
    assert a == Mat2(2, -1, 0, scalar(Fraction(1, 2)))
    assert a * Vec2(1, 2) == Vec2(0, 1)


def test_normalize_to_vertical_random():
    rng = random.Random(7)
    for _ in range(100):
        p = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if p == 0 and q == 0:
            continue
        v = Vec2(p, q)
        a = normalize_to_vertical(v)
        assert a.det() == scalar(1)
        img = a * v
        assert img.x == scalar(0) and img.y.sign() > 0


def test_canonical_direction():
    assert canonical_direction(Vec2(-2, -4)) == canonical_direction(Vec2(1, 2))
    assert canonical_direction(Vec2(3, 0)) == canonical_direction(Vec2(1, 0))
    c = canonical_direction(Vec2(Fraction(1, 2), Fraction(1, 3)))
    assert parallel(c, Vec2(Fraction(1, 2), Fraction(1, 3)))


def test_boundary_point():
    assert boundary_point(Vec2(1, 2)) == scalar(Fraction(1, 2))
    assert boundary_point(Vec2(0, 1)) == scalar(0)
    assert boundary_point(Vec2(1, 0)) is None


def test_functoriality_on_surfaces():
    c = Surface.cross(1, 1, marked=[(0, (Fraction(3, 2), Fraction(3, 2)), "p")])
    a = horocycle_matrix(1)
    b = geodesic_matrix(2)
    assert c.transform(a).transform(b) == c.transform(b * a)


def test_area_and_singularities_invariant_under_words():
    gens = [Mat2(1, 0, 1, 1), Mat2(1, 1, 0, 1), geodesic_matrix(2)]
    rng = random.Random(11)
    c = Surface.cross(1, 1)
    for _ in range(20):
        m = Mat2.identity()
        for _ in range(rng.randint(1, 5)):
            m = m * rng.choice(gens)
        assert m.det() == scalar(1)
        image = c.transform(m)
        assert image.area == c.area
        assert sorted(image.cone_windings) == sorted(c.cone_windings)


def test_twist_matrix_fixes_direction():
    for d in (Vec2(1, 0), Vec2(0, 1), Vec2(1, 1), Vec2(-3, 1)):
        m = twist_matrix(d, 3)
        assert m.det() == scalar(1)
        assert m * d == d
        is_parabolic_fixing(m, d)  # no raise
    # horizontal twist by s' = 3 is the standard upper shear inverse
    assert twist_matrix(Vec2(1, 0), 3) == Mat2(1, -3, 0, 1)


def test_is_parabolic_fixing_rejections():
    with pytest.raises(NotParabolicMatrix):
        is_parabolic_fixing(Mat2(2, 0, 0, 2), Vec2(1, 0))       # det 4
    with pytest.raises(NotParabolicMatrix):
        is_parabolic_fixing(geodesic_matrix(2), Vec2(1, 0))      # trace 5/2
    with pytest.raises(NotParabolicMatrix):
        is_parabolic_fixing(Mat2.identity(), Vec2(1, 0))         # +-identity
    with pytest.raises(NotParabolicMatrix):
        is_parabolic_fixing(Mat2(1, 3, 0, 1), Vec2(0, 1))        # fixes (1,0)
    is_parabolic_fixing(Mat2(1, 3, 0, 1), Vec2(1, 0))
    is_parabolic_fixing(Mat2(-1, 3, 0, -1), Vec2(1, 0))          # trace -2
