"""
JSON and SVG input/output for configurations and triangulations.

Point-set schema::

    {"points": [[re, im], ...], "fixed": [i, j, k], "infinity": optional index}

The coordinate stored for the vertex at infinity is ignored.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Optional, Sequence, Union

from common.settings import CONVENTION_INFINITY, get_numeric_settings
from common.utils.logging_setup import setup_logger

from .config import PointConfig
from .triangulation import Triangulation

logger = setup_logger(__name__)

SCHEMA_VERSION = 1
SVG_SIZE = 1000.0
_SVG_MARGIN = 0.08


def config_from_dict(
    payload: dict,
    convention: Optional[str] = None,
    fixed: Optional[Sequence[int]] = None,
) -> PointConfig:
    """
    Build a PointConfig from the point-set schema. `fixed` overrides the
    payload's fixed triple; under the infinity convention without an explicit
    index the first fixed vertex is sent to infinity.
    """
    if "points" not in payload:
        raise ValueError("point-set JSON needs a 'points' array")
    triple = list(fixed) if fixed is not None else payload.get("fixed", [0, 1, 2])
    infinity = payload.get("infinity")
    chosen = convention or (CONVENTION_INFINITY if infinity is not None else get_numeric_settings().convention)
    if chosen == CONVENTION_INFINITY:
        if infinity is None or infinity not in triple:
            infinity = triple[0]
    else:
        infinity = None
    return PointConfig.create(payload["points"], triple, infinity=infinity, name=payload.get("name", ""))


def load_config(
    path: Union[str, Path],
    convention: Optional[str] = None,
    fixed: Optional[Sequence[int]] = None,
) -> PointConfig:
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        payload = json.load(handle)
    payload.setdefault("name", path.stem)
    config = config_from_dict(payload, convention=convention, fixed=fixed)
    logger.info("Loaded %d points from %s (%s convention)", config.n_vertices, path, config.convention)
    return config


def dump_config(config: PointConfig, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(config.to_dict(), indent=2), encoding="utf-8")


def triangulation_to_dict(t: Triangulation) -> dict:
    thetas = t.thetas
    circles = []
    for g in t.geometries:
        if g.is_infinite:
            continue
        circles.append({
            "face": list(g.vertices),
            "center": [g.circumcenter.real, g.circumcenter.imag],
            "radius": g.circumradius,
            "area": g.area,
        })
    return {
        "version": SCHEMA_VERSION,
        "convention": t.config.convention,
        "fixed": list(t.config.fixed),
        "infinity": t.config.infinity,
        "vertices": [
            None if t.config.is_infinite(v) else [z.real, z.imag]
            for v, z in enumerate(t.config.points)
        ],
        "edges": [list(e) for e in t.edges],
        "faces": [list(f) for f in t.faces],
        "theta": [float(x) for x in thetas],
        "circumcircles": circles,
    }


def render_svg(t: Triangulation) -> str:
    """
    Edges as lines, circumcircles as circles, Voronoi vertices as small
    squares, in a fixed 1000-unit view box fitted to the finite points.
    Edges to the vertex at infinity are drawn as rays leaving the hull.
    """
    config = t.config
    center, scale = config.center, config.scale
    usable = SVG_SIZE * (1.0 - 2.0 * _SVG_MARGIN)

    def to_view(z: complex) -> tuple[float, float]:
        w = (z - center) / scale
        return SVG_SIZE / 2 + w.real * usable, SVG_SIZE / 2 - w.imag * usable

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE:g} {SVG_SIZE:g}">',
        '<g fill="none" stroke="#4a7ab8" stroke-width="1">',
    ]
    for g in t.geometries:
        if g.is_infinite:
            continue
        cx, cy = to_view(g.circumcenter)
        r = g.circumradius / scale * usable
        parts.append(f'<circle class="circumcircle" cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}"/>')
    parts.append("</g>")

    parts.append('<g stroke="#222222" stroke-width="2">')
    for u, v in t.edges:
        if config.is_infinite(u) or config.is_infinite(v):
            finite = v if config.is_infinite(u) else u
            z = config.points[finite]
            direction = z - center
            direction = direction / abs(direction) if abs(direction) > 0 else 1.0
            x1, y1 = to_view(z)
            x2, y2 = to_view(z + direction * scale * 2.0)
            parts.append(f'<line class="ray" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
        else:
            x1, y1 = to_view(config.points[u])
            x2, y2 = to_view(config.points[v])
            parts.append(f'<line class="edge" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
    parts.append("</g>")

    parts.append('<g fill="#c0392b">')
    for g in t.geometries:
        if g.is_infinite or not math.isfinite(g.circumradius):
            continue
        x, y = to_view(g.circumcenter)
        parts.append(f'<rect class="voronoi" x="{x - 3:.3f}" y="{y - 3:.3f}" width="6" height="6"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
