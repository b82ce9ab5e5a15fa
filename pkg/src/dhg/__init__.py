"""Hyperbolic digraphs: thin triangles, boundaries, ends and visual metrics.

Infinite digraphs are handled through finite truncations of lazily
generated families; every answer that could change under further
expansion says so.
"""
__version__ = "0.1.0"

from .extdist import INF
from .digraph import Digraph, Side, ball, dist, dist_sym, ingest_edge_list
from .families import FAMILIES, expand, get_family, truncate
from .geodesics import geodesics, is_quasi_geodesic, qi_check
from .hyperbolicity import (Sampled, audit_transitive_cover, audit_triangle_sides, b_profile, delta_of,
                            derive_constants)
from .rays import RaySpec, builtin_rays, materialize
from .boundary import audit_no_3_chain, classify, relate_leq
from .ends import classify_ends, refinement_map, relate_end
from .visual import WorkingSet, neighborhood, visual_matrix

__all__ = [
    "INF", "Digraph", "Side", "ball", "dist", "dist_sym", "ingest_edge_list",
    "FAMILIES", "expand", "get_family", "truncate",
    "geodesics", "is_quasi_geodesic", "qi_check",
    "Sampled", "audit_transitive_cover", "audit_triangle_sides", "b_profile", "delta_of", "derive_constants",
    "RaySpec", "builtin_rays", "materialize",
    "audit_no_3_chain", "classify", "relate_leq",
    "classify_ends", "refinement_map", "relate_end",
    "WorkingSet", "neighborhood", "visual_matrix",
]
