"""Parallel piecewise-linear Morse-Smale segmentation.

Path compression labels every vertex with the extrema its steepest ascent
and descent lines reach; multi-label marching triangles/tetrahedra turn the
labels into region-separating geometry.
"""

from .complex import ExplicitMesh, ImplicitGrid, LinkView, SimplicialComplex, build_implicit_grid
from .marching import (
    EmitPlan,
    SeparatingMesh,
    emit,
    emit_boundaries,
    emit_separators,
    extract_geometry,
    plan_emission,
    select_labels,
    tetra_code,
    triangle_code,
)
from .orderfield import InvalidFieldError, VertexClass, classify_vertex, compute_order
from .segmentation import SegmentationResult, combine_ms, oracle_integral_walk, segment

__version__ = "0.1.0"

__all__ = [
    "EmitPlan",
    "ExplicitMesh",
    "ImplicitGrid",
    "InvalidFieldError",
    "LinkView",
    "SegmentationResult",
    "SeparatingMesh",
    "SimplicialComplex",
    "VertexClass",
    "build_implicit_grid",
    "classify_vertex",
    "combine_ms",
    "compute_order",
    "emit",
    "emit_boundaries",
    "emit_separators",
    "extract_geometry",
    "oracle_integral_walk",
    "plan_emission",
    "segment",
    "select_labels",
    "tetra_code",
    "triangle_code",
]
