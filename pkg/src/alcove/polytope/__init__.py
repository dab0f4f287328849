"""Exact-rational convex polytopes: H/V representations, projection, volume."""

from .hrep import (
    HPolytope, PolytopeError, UnboundedError, contains, contains_float, embed, fix_coordinates,
    integer_row,
)
from .io import (
    from_lrs_h, from_lrs_v, polytope_from_json, polytope_to_json, to_lrs_h, to_lrs_v,
    vertices_from_json, vertices_to_json,
)
from .lp import simplex_min
from .ops import (
    Faces, canonical_form, dimension, faces, fm_eliminate, intersect, is_empty, is_redundant,
    minimize, project, reduce_redundant, relative_volume, simplex_volume, triangulation, volume,
)
from .union import PolytopeUnion, union_volume
from .vertices import VPolytope, brute_force_vertices, enumerate_vertices, hull_rows

__all__ = [
    "HPolytope", "VPolytope", "PolytopeUnion", "PolytopeError", "UnboundedError", "Faces",
    "contains", "contains_float", "embed", "fix_coordinates", "integer_row", "intersect",
    "fm_eliminate", "project", "reduce_redundant", "canonical_form", "enumerate_vertices",
    "brute_force_vertices", "hull_rows", "dimension", "volume", "relative_volume", "union_volume",
    "simplex_volume", "triangulation", "faces", "is_empty", "is_redundant", "minimize",
    "simplex_min", "to_lrs_h", "to_lrs_v", "from_lrs_h", "from_lrs_v", "polytope_to_json",
    "polytope_from_json", "vertices_to_json", "vertices_from_json",
]
