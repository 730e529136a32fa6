"""Exact geometry of translation surfaces: cylinder decompositions, splitting
ratios of marked points, twist orbits, slit coverings and direction censuses.
"""

from .census import (CuspInvariant, DirectionReport, census, cusp_invariant,
                     fat_sequence)
from .covers import (CoverSpec, Slit, build_cover, cyclic_slit_cover,
                     double_cover, is_balanced, riemann_hurwitz)
from .cylinders import (Cylinder, Decomposition, DirectionClass,
                        classify_direction, decompose, dehn_twist_point,
                        mark_ratios, signature_of_moduli, torus_signature,
                        twist_orbit)
from .errors import VeechkitError
from .field import (FieldScalar, ContinuedFraction, commensurable,
                    commensurability_classes, continued_fraction, field_sqrt,
                    least_common_integer_multiple, parse_scalar, scalar)
from .geometry import Mat2, Vec2, boundary_point, canonical_direction
from .linear import is_parabolic_fixing, twist_matrix
from .surface import MarkedPoint, Polygon, Surface, singularities, validate
from .trace import (ConnectionEvidence, TraceEvent, advance,
                    is_connection_point_up_to, saddle_connections,
                    separatrices, trace)

__version__ = "0.1.0"

__all__ = [
    "VeechkitError", "FieldScalar", "ContinuedFraction", "commensurable",
    "commensurability_classes", "continued_fraction", "field_sqrt",
    "least_common_integer_multiple", "parse_scalar", "scalar",
    "Mat2", "Vec2", "boundary_point", "canonical_direction",
    "MarkedPoint", "Polygon", "Surface", "singularities", "validate",
    "TraceEvent", "ConnectionEvidence", "trace", "advance", "separatrices",
    "saddle_connections", "is_connection_point_up_to",
    "Cylinder", "Decomposition", "DirectionClass", "decompose",
    "classify_direction", "torus_signature", "signature_of_moduli",
    "dehn_twist_point", "twist_orbit", "mark_ratios",
    "twist_matrix", "is_parabolic_fixing",
    "Slit", "CoverSpec", "build_cover", "cyclic_slit_cover", "double_cover",
    "riemann_hurwitz", "is_balanced",
    "CuspInvariant", "DirectionReport", "census", "cusp_invariant",
    "fat_sequence", "__version__",
]
