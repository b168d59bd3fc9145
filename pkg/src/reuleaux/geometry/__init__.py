from .ballpoly import (
    BallComplex,
    CanonicalInvolution,
    ClassificationReport,
    ball_complex,
    canonical_involution,
    classify,
    essential_points,
    in_ball_polyhedron,
    is_tight,
    one_skeleton,
    to_off,
)
from .miniball import JUNG_RATIO, Circumball, circumball, minimal_enclosing_ball
from .pointset import PointSet, diameter, diameter_graph, distance_matrix

__all__ = [
    "BallComplex", "CanonicalInvolution", "Circumball", "ClassificationReport",
    "JUNG_RATIO", "PointSet", "ball_complex", "canonical_involution", "circumball",
    "classify", "diameter", "diameter_graph", "distance_matrix", "essential_points",
    "in_ball_polyhedron", "is_tight", "minimal_enclosing_ball", "one_skeleton", "to_off",
]
