"""
Discrete complex derivatives and the Faddeev–Popov form
=======================================================
A vertex function Φ, linearly interpolated over a face, has constant
derivatives ∇Φ(f) = ∂Φ/∂z and ∇̄Φ(f) = ∂Φ/∂z̄ on it. The Kähler matrix is
the quadratic form

    Φ·D·Ψ̄ = Σ_f (Area(f)/R(f)²) ∇̄Φ(f) · conj(∇̄Ψ(f))

and φ(f) = −2 log R(f) plays the part of the Liouville field on the
Voronoi vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from common.utils.logging_setup import setup_logger

from .errors import CollinearFace
from .mesh import FaceGeom, Triangulation
from .operators import kahler_assemble, kahler_face

logger = setup_logger(__name__)

VertexFunction = np.ndarray  # complex value per vertex, index = vertex id


def vertex_function(t: Triangulation, fn: Callable[[complex], complex]) -> VertexFunction:
    """Evaluate fn on the finite vertices; zero on the vertex at infinity."""
    config = t.config
    return np.array(
        [0j if config.is_infinite(v) else complex(fn(config.points[v])) for v in range(t.n_vertices)],
        dtype=complex,
    )


def gradient_ops(g: FaceGeom, phi: VertexFunction) -> tuple[complex, complex]:
    """(∇Φ(f), ∇̄Φ(f)) of the affine interpolant of Φ over the face."""
    if g.is_infinite:
        raise ValueError(f"face {g.vertices} passes through infinity")
    if g.area == 0:
        raise CollinearFace("face has zero area", face=g.vertices)
    z1, z2, z3 = g.points
    p1, p2, p3 = (complex(phi[v]) for v in g.vertices)
    dz = (p1 * (z3 - z2).conjugate() + p2 * (z1 - z3).conjugate() + p3 * (z2 - z1).conjugate()) / (4j * g.area)
    dzbar = -(p1 * (z3 - z2) + p2 * (z1 - z3) + p3 * (z2 - z1)) / (4j * g.area)
    return dz, dzbar


def fp_pairing(g: FaceGeom, phi: VertexFunction, psi: VertexFunction) -> tuple[complex, complex]:
    """
    Both sides of the face identity: Φ·D(f)·Ψ̄ from the Kähler block and
    (Area/R²) ∇̄Φ conj(∇̄Ψ) from the derivatives.
    """
    index = list(g.vertices)
    left = complex(phi[index] @ kahler_face(g) @ np.conj(psi[index]))
    _, dbar_phi = gradient_ops(g, phi)
    _, dbar_psi = gradient_ops(g, psi)
    right = (g.area / g.circumradius ** 2) * dbar_phi * dbar_psi.conjugate()
    return left, complex(right)


def pairing_total(t: Triangulation, phi: VertexFunction, psi: VertexFunction) -> tuple[complex, complex]:
    """Φ·D·Ψ̄ with the assembled D, and the face sum of (Area/R²) ∇̄Φ conj(∇̄Ψ)."""
    left = complex(phi @ kahler_assemble(t) @ np.conj(psi))
    right = 0j
    for g in t.geometries:
        if g.is_infinite:
            continue
        _, dbar_phi = gradient_ops(g, phi)
        _, dbar_psi = gradient_ops(g, psi)
        right += (g.area / g.circumradius ** 2) * dbar_phi * dbar_psi.conjugate()
    return left, right


@dataclass(frozen=True)
class LiouvilleField:
    faces: tuple[int, ...]
    centers: np.ndarray  # Voronoi vertices w_f
    phi: np.ndarray  # −2 log R(f)
    area_element: np.ndarray  # Area(f), the volume element d²w_f

    @property
    def conformal_factor(self) -> np.ndarray:
        """e^{φ(f)} = 1/R(f)²."""
        return np.exp(self.phi)

    def to_dict(self) -> dict:
        return {
            "faces": list(self.faces),
            "centers": [[w.real, w.imag] for w in self.centers],
            "phi": self.phi.tolist(),
            "area": self.area_element.tolist(),
        }


def liouville_field(t: Triangulation, faces: Optional[list[int]] = None) -> LiouvilleField:
    chosen = [f for f in (faces if faces is not None else range(t.n_faces)) if not t.is_infinite_face(f)]
    geoms = [t.geometries[f] for f in chosen]
    phi = np.array([-2.0 * math.log(g.circumradius) for g in geoms])
    logger.debug("Liouville field on %d faces", len(chosen))
    return LiouvilleField(
        faces=tuple(chosen),
        centers=np.array([g.circumcenter for g in geoms], dtype=complex),
        phi=phi,
        area_element=np.array([g.area for g in geoms]),
    )
