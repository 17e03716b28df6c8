"""Point configurations, Delaunay triangulations and their geometry."""

from .builder import DelaunayReport, DelaunayViolation, delaunay_build, edge_margin, validate_delaunay
from .config import PointConfig, mobius_apply, random_sl2
from .export import config_from_dict, dump_config, load_config, render_svg, triangulation_to_dict
from .geometry import (
    FaceGeom,
    compute_thetas,
    defect_angle,
    defect_angle_opposite,
    edge_theta,
    face_geometry,
    mean_edge_length,
    total_defect,
    triangle_geometry,
    vertex_angle_sum,
)
from .triangulation import Triangulation, canonical_face, edge_key

__all__ = [
    "DelaunayReport",
    "DelaunayViolation",
    "FaceGeom",
    "PointConfig",
    "Triangulation",
    "canonical_face",
    "compute_thetas",
    "config_from_dict",
    "defect_angle",
    "defect_angle_opposite",
    "delaunay_build",
    "dump_config",
    "edge_key",
    "edge_margin",
    "edge_theta",
    "face_geometry",
    "mean_edge_length",
    "load_config",
    "mobius_apply",
    "random_sl2",
    "render_svg",
    "total_defect",
    "triangle_geometry",
    "triangulation_to_dict",
    "validate_delaunay",
    "vertex_angle_sum",
]
