from .coloring import (
    ColoringCertificate,
    chromatic_number,
    is_edge_4_critical,
    is_vertex_4_critical,
    k_coloring,
    optimal_coloring,
)
from .connectivity import Connectivity, connectivity, is_3_connected
from .embedded import EmbeddedGraph, are_isomorphic, canonical_form, dual, map_isomorphisms
from .involution import Involution, diagonal_graph, find_involution, verify_involution

__all__ = [
    "ColoringCertificate", "Connectivity", "EmbeddedGraph", "Involution",
    "are_isomorphic", "canonical_form", "chromatic_number", "connectivity",
    "diagonal_graph", "dual", "find_involution", "is_3_connected",
    "is_edge_4_critical", "is_vertex_4_critical", "k_coloring",
    "map_isomorphisms", "optimal_coloring", "verify_involution",
]
