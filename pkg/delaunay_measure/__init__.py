"""
Conformally invariant measure on Delaunay triangulations of the sphere.

Subpackages follow the pipeline: mesh → hyperbolic → combinatorics →
operators → measure, with fpgauge, chern and sampler built on top.
"""

from .errors import MeasureError
from .fixtures import hexagon_patch, octahedron, random_config, tetrahedron
from .mesh import PointConfig, Triangulation, delaunay_build
from .verify import VerifyReport, run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "MeasureError",
    "PointConfig",
    "Triangulation",
    "VerifyReport",
    "delaunay_build",
    "hexagon_patch",
    "octahedron",
    "random_config",
    "run_identity_suite",
    "tetrahedron",
]
