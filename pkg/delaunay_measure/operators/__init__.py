"""Incidence operators, the angle Jacobian and the Kähler matrix."""

from .assemble import OperatorSet, assemble_operators, basis_change_matrix, edge_vertex_matrix, jacobian
from .kahler import (
    cotangent_laplacian,
    kahler_assemble,
    kahler_face,
    kahler_face_spectrum,
    min_eigenvalue_ratio,
    positive_eigenvalue,
    zero_modes,
)

__all__ = [
    "OperatorSet",
    "assemble_operators",
    "basis_change_matrix",
    "cotangent_laplacian",
    "edge_vertex_matrix",
    "jacobian",
    "kahler_assemble",
    "kahler_face",
    "kahler_face_spectrum",
    "min_eigenvalue_ratio",
    "positive_eigenvalue",
    "zero_modes",
]
