"""Lobachevsky and Bloch–Wigner functions, tetrahedron volumes, the prepotential."""

from .special import (
    bloch_wigner,
    bloch_wigner_dilog,
    clausen,
    dilogarithm,
    lobachevsky,
    lobachevsky_derivative,
    reduce_angle,
)
from .volume import (
    MAX_VOLUME,
    Prepotential,
    face_volume,
    face_volume_cross_ratio,
    hessian_fd,
    hessian_fd_matrix,
    local_prepotential,
    prepotential,
)

__all__ = [
    "MAX_VOLUME",
    "Prepotential",
    "bloch_wigner",
    "bloch_wigner_dilog",
    "clausen",
    "dilogarithm",
    "face_volume",
    "face_volume_cross_ratio",
    "hessian_fd",
    "hessian_fd_matrix",
    "lobachevsky",
    "lobachevsky_derivative",
    "local_prepotential",
    "prepotential",
    "reduce_angle",
]
