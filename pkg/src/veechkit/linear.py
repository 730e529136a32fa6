"""The SL(2) action on directions and the few named one-parameter families."""

from __future__ import annotations

from .errors import NotParabolicMatrix
from .field import scalar
from .geometry import (Mat2, Vec2, boundary_point, canonical_direction,
                       geodesic_matrix, horocycle_matrix, normalize_to_vertical,
                       parallel)

__all__ = [
    "Mat2", "boundary_point", "canonical_direction", "geodesic_matrix",
    "horocycle_matrix", "normalize_to_vertical", "twist_matrix",
    "is_parabolic_fixing",
]


def twist_matrix(direction: Vec2, s) -> Mat2:
    """The unit shear fixing `direction`, with shearing amount s.

    Conjugates the standard horocycle flow into the frame where `direction`
    is vertical; the result fixes every vector parallel to `direction`.
    """
    a = normalize_to_vertical(direction)
    return a.inverse() * horocycle_matrix(s) * a


def is_parabolic_fixing(m: Mat2, direction: Vec2) -> None:
    """Check m is parabolic (trace +-2, not +-identity) and fixes `direction`.

    Raises NotParabolicMatrix otherwise.
    """
    det = m.det()
    if det != scalar(1):
        raise NotParabolicMatrix("matrix must lie in SL2, det=%s" % det)
    tr = m.a + m.d
    if abs(tr) != scalar(2):
        raise NotParabolicMatrix("trace %s is not +-2" % tr)
    ident = Mat2.identity()
    if m == ident or m == Mat2(-1, 0, 0, -1):
        raise NotParabolicMatrix("matrix is +-identity, not parabolic")
    if not parallel(m * direction, direction):
        raise NotParabolicMatrix("matrix does not fix direction %s" % direction)
