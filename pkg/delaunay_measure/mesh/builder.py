"""
Delaunay construction on the Riemann sphere
===========================================
Bowyer–Watson insertion over a closed sphere triangulation. The sphere
predicate makes the vertex at infinity and the clockwise exterior faces
ordinary cases, so no super-triangle is needed and the result is the
closed triangulation directly.

Construction uses exact signs only. Degeneracy is judged afterwards on the
finished mesh with scale-free margins, so configurations with
cocircular quadruples that are not adjacent (a regular hexagon with its
centre, say) still build.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger

from ..errors import DegenerateInput
from .config import PointConfig
from .predicates import insphere, insphere_relative, orient2d_relative
from .triangulation import Face, Triangulation

logger = setup_logger(__name__)


def delaunay_build(config: PointConfig, tol_geom: Optional[float] = None) -> Triangulation:
    """
    The unique Delaunay triangulation of the configuration, closed on the
    sphere. In the infinity convention the neighbours of the vertex at
    infinity are the convex hull vertices.
    """
    tol = tol_geom if tol_geom is not None else get_numeric_settings().tol_geom
    pts = config.normalized
    order = list(config.fixed) + [v for v in range(config.n_vertices) if v not in config.fixed]

    if config.n_vertices == 3:
        faces = _two_sided_triangle(pts, order)
    else:
        faces = _bowyer_watson(pts, order)

    t = Triangulation.from_faces(config, faces)
    _reject_degenerate(t, tol)
    logger.info(
        "Built Delaunay triangulation%s: V=%d E=%d F=%d",
        f" of {config.name}" if config.name else "",
        t.n_vertices,
        t.n_edges,
        t.n_faces,
    )
    return t


def _two_sided_triangle(pts, order) -> list[Face]:
    a, b, c = order
    if None not in (pts[a], pts[b], pts[c]) and orient2d_relative(pts[a], pts[b], pts[c]) == 0.0:
        raise DegenerateInput("three collinear points", vertices=(a, b, c))
    return [(a, b, c), (a, c, b)]


def _bowyer_watson(pts, order) -> list[Face]:
    p0, p1, p2 = order[:3]
    seed_face = (pts[p0], pts[p1], pts[p2])
    rest = order[3:]
    p3 = next((v for v in rest if insphere(seed_face, pts[v]) != 0.0), None)
    if p3 is None:
        raise DegenerateInput("all points lie on one circle", vertices=tuple(order))

    faces: dict[int, Face] = {}
    serial = 0
    tetra = [(p0, p1, p2), (p0, p3, p1), (p1, p3, p2), (p0, p2, p3)]
    if insphere(seed_face, pts[p3]) > 0:
        tetra = [(a, c, b) for (a, b, c) in tetra]
    for face in tetra:
        faces[serial] = face
        serial += 1

    for p in rest:
        if p == p3:
            continue
        cavity = {
            fid for fid, face in faces.items()
            if insphere(tuple(pts[v] for v in face), pts[p]) > 0
        }
        if not cavity:
            raise DegenerateInput(f"point {p} is not strictly inside any face cap", vertex=p)

        inner = {(faces[fid][k], faces[fid][(k + 1) % 3]) for fid in cavity for k in range(3)}
        boundary = [(u, v) for (u, v) in inner if (v, u) not in inner]
        _check_star_shaped(boundary, p)

        for fid in cavity:
            del faces[fid]
        for u, v in boundary:
            faces[serial] = (u, v, p)
            serial += 1
        logger.debug("Inserted vertex %d: cavity of %d faces", p, len(cavity))

    return list(faces.values())


def _check_star_shaped(boundary: list[tuple[int, int]], p: int) -> None:
    successor = dict(boundary)
    if len(successor) != len(boundary):
        raise DegenerateInput(f"cavity of vertex {p} is not a disk", vertex=p)
    start = boundary[0][0]
    node, steps = successor[start], 1
    while node != start:
        node = successor.get(node)
        steps += 1
        if node is None or steps > len(boundary):
            raise DegenerateInput(f"cavity of vertex {p} is not a disk", vertex=p)
    if steps != len(boundary):
        raise DegenerateInput(f"cavity of vertex {p} is not a disk", vertex=p)


def _reject_degenerate(t: Triangulation, tol: float) -> None:
    pts = t.config.normalized
    for f, face in enumerate(t.faces):
        if t.is_infinite_face(f):
            continue
        margin = orient2d_relative(*(pts[v] for v in face))
        if abs(margin) < tol:
            raise DegenerateInput(
                f"collinear face {face} (relative orientation {margin:.3e})", face=face, margin=margin
            )
    if t.n_vertices == 3:
        # both faces share all three vertices; there is no opposite apex
        return
    for e in range(t.n_edges):
        margin = edge_margin(t, e)
        if abs(margin) < tol:
            raise DegenerateInput(
                f"cocircular quadruple around edge {t.edges[e]} (margin {margin:.3e})",
                edge=t.edges[e],
                margin=margin,
            )


def edge_margin(t: Triangulation, e: int) -> float:
    """
    Scale-free Delaunay margin of an edge: positive when the apex of one
    side lies strictly outside the cap of the other face, zero on a flip
    boundary.
    """
    pts = t.config.normalized
    h, twin = t.edge_halfedges(e)
    face = tuple(pts[v] for v in t.faces[t.face_of(h)])
    return -insphere_relative(face, pts[t.apex(twin)])


# ── Validation ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class DelaunayViolation:
    face: Face
    vertex: int
    margin: float  # negative: vertex inside the face cap


@dataclass(frozen=True)
class DelaunayReport:
    violations: tuple[DelaunayViolation, ...]
    min_margin: float
    flip_boundaries: tuple[tuple[int, int], ...] = field(default=())
    checked_pairs: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "min_margin": self.min_margin,
            "checked_pairs": self.checked_pairs,
            "violations": [
                {"face": list(v.face), "vertex": v.vertex, "margin": v.margin} for v in self.violations
            ],
            "flip_boundaries": [list(e) for e in self.flip_boundaries],
        }


def validate_delaunay(
    t: Triangulation,
    tolerance: Optional[float] = None,
    flip_margin: Optional[float] = None,
) -> DelaunayReport:
    """
    Test every face against every vertex not on it. The margin is the
    scale-free sphere predicate with the sign flipped, so it is positive
    when the vertex lies outside the face's circumcircle (or half plane).
    """
    settings = get_numeric_settings()
    tol = tolerance if tolerance is not None else settings.tol_geom
    near = flip_margin if flip_margin is not None else settings.flip_margin
    pts = t.config.normalized

    violations: list[DelaunayViolation] = []
    min_margin = float("inf")
    checked = 0
    for face in t.faces:
        corners = tuple(pts[v] for v in face)
        for v in range(t.n_vertices):
            if v in face:
                continue
            margin = -insphere_relative(corners, pts[v])
            checked += 1
            min_margin = min(min_margin, margin)
            if margin < -tol:
                violations.append(DelaunayViolation(face=face, vertex=v, margin=margin))

    flips = tuple(t.edges[e] for e in range(t.n_edges) if abs(edge_margin(t, e)) < near)
    if violations:
        logger.warning("Delaunay check failed: %d violations, min margin %.3e", len(violations), min_margin)
    if flips:
        logger.warning("Edges on a flip boundary: %s", flips)
    return DelaunayReport(
        violations=tuple(violations),
        min_margin=min_margin,
        flip_boundaries=flips,
        checked_pairs=checked,
    )
