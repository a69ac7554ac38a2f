"""Log-concavity of t -> |e^t K ∩ L| for symmetric convex polygons and smooth D_n shapes."""

from .counterexamples import (
    MonteCarloEstimate, ViolationWitness, certify_quasiconcave_violation,
    certify_uniform_violation, monte_carlo_defect, quasi_concave_measure_of_scaled_Q,
    uniform_counterexample,
)
from .dihedral import (
    RadialShape, curvature_condition, dihedral_identity_check, make_dn_shape, w_point, w_shape,
)
from .dynamics import (
    MidpointWitness, PropertyBReport, SampledFunction, area_at, g_derivative, g_value,
    midpoint_logconcavity_check, property_B_check, sample_logf,
)
from .errors import GeometryError
from .geometry import (
    ConvexPolygon, Direction, Point, area, convex_hull, hausdorff_distance, intersect,
    linear_map, scale, square, support,
)
from .oracle import (
    CornerCaseParams, EdgeCaseParams, OracleVerdict, corner_case_check, edge_case_check,
    edge_case_params,
)
from .reduction import ExtendedPair, classify_square_case, normalize_parallelogram, reduce_pair
from .transversal import BoundaryComponent, boundary_components, check_class_F, perturb_to_F

__all__ = [
    "BoundaryComponent", "ConvexPolygon", "CornerCaseParams", "Direction", "EdgeCaseParams",
    "ExtendedPair", "GeometryError", "MidpointWitness", "MonteCarloEstimate", "OracleVerdict",
    "Point", "PropertyBReport", "RadialShape", "SampledFunction", "ViolationWitness",
    "area", "area_at", "boundary_components", "certify_quasiconcave_violation",
    "certify_uniform_violation", "check_class_F", "classify_square_case", "convex_hull",
    "corner_case_check", "curvature_condition", "dihedral_identity_check", "edge_case_check",
    "edge_case_params", "g_derivative", "g_value", "hausdorff_distance", "intersect",
    "linear_map", "make_dn_shape", "midpoint_logconcavity_check", "monte_carlo_defect",
    "normalize_parallelogram", "perturb_to_F", "property_B_check",
    "quasi_concave_measure_of_scaled_Q", "reduce_pair", "sample_logf", "scale", "square",
    "support", "uniform_counterexample", "w_point", "w_shape",
]
