"""
Per-face and per-edge geometry
==============================
Circumcircles, signed areas and interior angles of faces, the circle
intersection angles θ(e) of edges, vertex angle sums and defect angles.

Angles between circles are taken from arguments of cross-ratios, so the
same code handles clockwise exterior faces and the vertex at infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from common.settings import get_numeric_settings

from ..errors import CollinearFace
from .predicates import orient2d_relative

if TYPE_CHECKING:
    from .triangulation import Triangulation

_NAN = complex(math.nan, math.nan)


@dataclass(frozen=True)
class FaceGeom:
    """
    Geometry of one oriented face.

    Faces through the vertex at infinity carry is_infinite=True, an infinite
    radius, zero area and NaN angles; nothing downstream reads them.
    """

    vertices: tuple[int, int, int]
    points: tuple[complex, complex, complex]
    circumcenter: complex
    circumradius: float
    area: float  # signed; negative for clockwise faces
    angles: tuple[float, float, float]  # unsigned interior angle at each vertex
    is_infinite: bool = False

    @property
    def orientation(self) -> int:
        return 1 if self.area > 0 else -1

    @property
    def is_counterclockwise(self) -> bool:
        return not self.is_infinite and self.area > 0

    def cotangents(self) -> tuple[float, float, float]:
        return tuple(1.0 / math.tan(a) for a in self.angles)


def triangle_geometry(
    z1: complex,
    z2: complex,
    z3: complex,
    vertices: tuple[int, int, int] = (0, 1, 2),
    tol_geom: Optional[float] = None,
) -> FaceGeom:
    """FaceGeom of three plane points; CollinearFace when they are (nearly) aligned."""
    tol = tol_geom if tol_geom is not None else get_numeric_settings().tol_geom
    margin = orient2d_relative((z1.real, z1.imag), (z2.real, z2.imag), (z3.real, z3.imag))
    if abs(margin) < tol:
        raise CollinearFace(
            f"face {vertices} is degenerate (relative orientation {margin:.3e})",
            face=vertices,
            margin=margin,
        )

    b, c = z2 - z1, z3 - z1
    cross = b.conjugate() * c - b * c.conjugate()  # 2i × twice the signed area
    area = (cross / 4j).real
    center = z1 + (abs(b) ** 2 * c - abs(c) ** 2 * b) / cross
    radius = abs(z1 - center)

    angles = (
        abs(cmath.phase((z3 - z1) / (z2 - z1))),
        abs(cmath.phase((z1 - z2) / (z3 - z2))),
        abs(cmath.phase((z2 - z3) / (z1 - z3))),
    )
    return FaceGeom(
        vertices=vertices,
        points=(z1, z2, z3),
        circumcenter=center,
        circumradius=radius,
        area=area,
        angles=angles,
    )


def face_geometry(t: "Triangulation", f: int, tol_geom: Optional[float] = None) -> FaceGeom:
    face = t.faces[f]
    if t.is_infinite_face(f):
        points = tuple(_NAN if t.config.is_infinite(v) else t.config.points[v] for v in face)
        return FaceGeom(
            vertices=face,
            points=points,
            circumcenter=_NAN,
            circumradius=math.inf,
            area=0.0,
            angles=(math.nan, math.nan, math.nan),
            is_infinite=True,
        )
    z1, z2, z3 = (t.config.points[v] for v in face)
    return triangle_geometry(z1, z2, z3, vertices=face, tol_geom=tol_geom)


def compute_face_geometries(t: "Triangulation") -> tuple[FaceGeom, ...]:
    return tuple(face_geometry(t, f) for f in range(t.n_faces))


# ── Edge angles ──────────────────────────────────────────────────────────────

def _cross_ratio(z1, z2, z3, z4) -> complex:
    """
    [(z2 − z3)(z1 − z4)] / [(z1 − z3)(z2 − z4)] with the factors that
    contain the vertex at infinity (passed as None) dropped.
    """
    num, den = 1 + 0j, 1 + 0j
    for a, b, into_num in ((z2, z3, True), (z1, z4, True), (z1, z3, False), (z2, z4, False)):
        if a is None or b is None:
            continue
        if into_num:
            num *= a - b
        else:
            den *= a - b
    return num / den


def halfedge_theta(t: "Triangulation", h: int) -> float:
    """θ of the edge carrying half-edge h."""
    v1, v2, v3 = t.origin(h), t.target(h), t.apex(h)
    v4 = t.apex(t.twin(h))
    z1, z2, z3, z4 = (None if t.config.is_infinite(v) else t.config.points[v] for v in (v1, v2, v3, v4))
    theta_star = cmath.phase(_cross_ratio(z1, z2, z3, z4))
    return min(max(math.pi - theta_star, 0.0), math.pi)


def edge_theta(t: "Triangulation", e: int) -> float:
    """
    θ(e) = π − α − α′, with α, α′ the angles facing e in its two faces.
    Zero exactly when the four vertices are cocircular.
    """
    h, _ = t.edge_halfedges(e)
    return halfedge_theta(t, h)


def compute_thetas(t: "Triangulation") -> np.ndarray:
    thetas = np.array([edge_theta(t, e) for e in range(t.n_edges)], dtype=float)
    thetas.flags.writeable = False
    return thetas


def vertex_angle_sum(t: "Triangulation", v: int) -> float:
    thetas = t.thetas
    return float(sum(thetas[e] for e in t.vertex_edges(v)))


# ── Defect angles ────────────────────────────────────────────────────────────

def defect_angle(t: "Triangulation", f: int) -> float:
    """Θ_f = θ + θ′ + θ″ − π over the three edges of f."""
    thetas = t.thetas
    return float(sum(thetas[e] for e in t.face_edges(f)) - math.pi)


def defect_angle_opposite(t: "Triangulation", f: int) -> float:
    """
    Θ_f = 2π − Σα − α′₁ − α′₂ − α′₃ from the signed angles facing f's edges
    in the neighbouring faces. Σα, the angle sum of f itself, is π, or −π
    on a clockwise face, so positive faces reduce to π − Σα′.
    """
    if t.is_infinite_face(f):
        raise ValueError(f"face {t.faces[f]} passes through infinity")
    total = 0.0
    for h in t.face_halfedges(f):
        twin = t.twin(h)
        apex = t.apex(twin)
        if t.config.is_infinite(apex):
            continue
        z_from, z_to, z_apex = (t.config.points[v] for v in (t.origin(twin), t.target(twin), apex))
        total += cmath.phase((z_to - z_apex) / (z_from - z_apex))
    own = math.pi if t.geometries[f].is_counterclockwise else -math.pi
    return 2 * math.pi - own - total


def total_defect(t: "Triangulation") -> float:
    """Σ_f Θ_f over the whole sphere; 4π for a flat closed configuration."""
    return float(sum(defect_angle(t, f) for f in range(t.n_faces)))


def mean_edge_length(t: "Triangulation", vertices) -> float:
    """Mean length of the finite edges at the given vertices; sets finite-difference steps."""
    lengths = [
        abs(t.config.points[v] - t.config.points[w])
        for v in vertices
        for w in t.neighbors(v)
        if not t.config.is_infinite(w)
    ]
    return float(np.mean(lengths))
