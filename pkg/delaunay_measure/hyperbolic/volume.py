"""
Ideal tetrahedron volumes and the Kähler prepotential
=====================================================
Each finite face carries the ideal tetrahedron over its circumcircle; its
volume is Л(α₁) + Л(α₂) + Л(α₃). The prepotential of a triangulation is

    𝒜 = −Σ_f sgn(Area f) · Vol(f)

so a clockwise exterior face (the fixed face f₀ enclosing the rest) enters
with a plus sign and faces through the vertex at infinity contribute 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger

from ..errors import FlipInsideStencil
from ..mesh import FaceGeom, PointConfig, Triangulation, delaunay_build, mean_edge_length, triangle_geometry
from .special import bloch_wigner, lobachevsky

logger = setup_logger(__name__)

# 3Л(π/3), the volume of the regular ideal tetrahedron.
MAX_VOLUME = 1.0149416064096536


def face_volume(g: FaceGeom) -> float:
    """Vol(f) = Л(α₁) + Л(α₂) + Л(α₃); zero for faces through infinity."""
    if g.is_infinite:
        return 0.0
    return float(sum(lobachevsky(a) for a in g.angles))


def face_volume_cross_ratio(g: FaceGeom) -> float:
    """The same volume as |D((z₃ − z₁)/(z₂ − z₁))|."""
    if g.is_infinite:
        return 0.0
    z1, z2, z3 = g.points
    return g.orientation * bloch_wigner((z3 - z1) / (z2 - z1))


@dataclass(frozen=True)
class Prepotential:
    value: float
    convention: str
    volumes: tuple[float, ...]  # sgn(Area f)·Vol(f) per face, in face order
    fixed_face_term: float = 0.0  # contribution of the fixed face, constant in the free points

    @property
    def variable_part(self) -> float:
        return self.value - self.fixed_face_term


def prepotential(t: Triangulation) -> Prepotential:
    volumes = tuple(g.orientation * face_volume(g) for g in t.geometries)
    fixed_term = 0.0
    if t.fixed_face is not None:
        fixed_term = -volumes[t.fixed_face]
    value = -float(sum(volumes))
    logger.debug("Prepotential %.12f over %d faces", value, len(volumes))
    return Prepotential(
        value=value,
        convention=t.config.convention,
        volumes=volumes,
        fixed_face_term=fixed_term,
    )


def local_prepotential(config: PointConfig, faces: Iterable[Sequence[int]]) -> float:
    """−Σ sgn(Area)·Vol over the given faces, from raw coordinates."""
    total = 0.0
    for face in faces:
        if any(config.is_infinite(v) for v in face):
            continue
        g = triangle_geometry(*(config.points[v] for v in face), vertices=tuple(face))
        total -= g.orientation * face_volume(g)
    return total


# ── Finite-difference Hessian ────────────────────────────────────────────────

class _Stencil:
    """Prepotential of the faces around u and v under displacements of u and v."""

    def __init__(self, t: Triangulation, u: int, v: int, check_flips: bool) -> None:
        self.t = t
        self.config = t.config
        self.check_flips = check_flips
        touched = set(t.vertex_faces[u]) | set(t.vertex_faces[v])
        self.faces = [t.faces[f] for f in sorted(touched)]

    def __call__(self, moves: dict[int, complex]) -> float:
        points = list(self.config.points)
        for vertex, delta in moves.items():
            points[vertex] = points[vertex] + delta
        moved = self.config.with_points(points)
        if self.check_flips:
            rebuilt = delaunay_build(moved)
            if not rebuilt.same_combinatorics(self.t):
                raise FlipInsideStencil(
                    "triangulation changes inside the finite-difference stencil",
                    moves={k: complex(d) for k, d in moves.items()},
                )
        return local_prepotential(moved, self.faces)


def hessian_fd(
    config: PointConfig,
    u: int,
    v: int,
    h: Optional[float] = None,
    triangulation: Optional[Triangulation] = None,
    check_flips: bool = True,
) -> complex:
    """
    Central-difference estimate of ∂²𝒜/∂z_u∂z̄_v.

    The step defaults to FD_STEP times the mean length of the edges at u and
    v. Every displaced configuration is rebuilt and must keep the same
    triangulation.
    """
    t = triangulation if triangulation is not None else delaunay_build(config)
    step = h if h is not None else get_numeric_settings().fd_step * mean_edge_length(t, {u, v})
    f = _Stencil(t, u, v, check_flips)

    if u == v:
        f0 = f({})
        fxx = (f({u: step}) - 2.0 * f0 + f({u: -step})) / step ** 2
        fyy = (f({u: 1j * step}) - 2.0 * f0 + f({u: -1j * step})) / step ** 2
        return complex(0.25 * (fxx + fyy))

    def mixed(du: complex, dv: complex) -> float:
        return (
            f({u: du, v: dv}) - f({u: du, v: -dv}) - f({u: -du, v: dv}) + f({u: -du, v: -dv})
        ) / (4.0 * step ** 2)

    fxx = mixed(step, step)
    fyy = mixed(1j * step, 1j * step)
    fxy = mixed(step, 1j * step)
    fyx = mixed(1j * step, step)
    return complex(0.25 * (fxx + fyy), 0.25 * (fxy - fyx))


def hessian_fd_matrix(
    config: PointConfig,
    vertices: Optional[Sequence[int]] = None,
    h: Optional[float] = None,
    check_flips: bool = True,
) -> np.ndarray:
    """Finite-difference ∂∂̄𝒜 over `vertices` (default: the free vertices)."""
    t = delaunay_build(config)
    chosen = list(vertices) if vertices is not None else list(config.free)
    out = np.zeros((len(chosen), len(chosen)), dtype=complex)
    for a, u in enumerate(chosen):
        for b, v in enumerate(chosen):
            if b < a:
                out[a, b] = out[b, a].conjugate()
                continue
            out[a, b] = hessian_fd(config, u, v, h=h, triangulation=t, check_flips=check_flips)
    return out
