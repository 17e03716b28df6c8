from __future__ import annotations

import cmath
import numbers
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from common.settings import CONVENTION_FIXED_FACE, CONVENTION_INFINITY
from common.utils.logging_setup import setup_logger

from ..errors import DuplicatePoint, PoleHit
from .predicates import SpherePoint

logger = setup_logger(__name__)

PointLike = Union[complex, float, int, Sequence[float]]

_SL2_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PointConfig:
    """
    Ordered plane positions with three fixed vertices.

    In the infinity convention one of the fixed vertices is the point at
    infinity; its stored coordinate is NaN and is never read.
    """

    points: tuple[complex, ...]
    fixed: tuple[int, int, int]
    infinity: Optional[int] = None
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        count = len(self.points)
        if count < 3:
            raise ValueError(f"need at least 3 points, got {count}")
        if len(self.fixed) != 3 or len(set(self.fixed)) != 3:
            raise ValueError(f"exactly three distinct fixed vertices required, got {self.fixed}")
        if any(not 0 <= v < count for v in self.fixed):
            raise ValueError(f"fixed vertex out of range: {self.fixed}")
        if self.infinity is not None and self.infinity not in self.fixed:
            raise ValueError("the vertex at infinity must be one of the fixed vertices")

        seen: dict[complex, int] = {}
        for v in self.finite_vertices:
            z = self.points[v]
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"point {v} is not finite: {z}")
            if z in seen:
                raise DuplicatePoint(
                    f"points {seen[z]} and {v} coincide", vertices=(seen[z], v)
                )
            seen[z] = v

    # ── Construction ─────────────────────────────────────────────────────

    @classmethod
    def create(
        cls,
        points: Iterable[PointLike],
        fixed: Sequence[int],
        infinity: Optional[int] = None,
        name: str = "",
    ) -> "PointConfig":
        values = [_to_complex(p) for p in points]
        if infinity is not None:
            values[infinity] = complex(math.nan, math.nan)
        return cls(
            points=tuple(values),
            fixed=tuple(int(v) for v in fixed),
            infinity=infinity,
            name=name,
        )

    def with_points(self, points: Sequence[complex]) -> "PointConfig":
        return PointConfig.create(points, self.fixed, self.infinity, self.name)

    def moved(self, vertex: int, position: complex) -> "PointConfig":
        values = list(self.points)
        values[vertex] = complex(position)
        return self.with_points(values)

    # ── Derived data ─────────────────────────────────────────────────────

    @property
    def convention(self) -> str:
        return CONVENTION_INFINITY if self.infinity is not None else CONVENTION_FIXED_FACE

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_free(self) -> int:
        return len(self.points) - 3

    @cached_property
    def free(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self.points)) if v not in self.fixed)

    @cached_property
    def finite_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self.points)) if v != self.infinity)

    def is_infinite(self, v: int) -> bool:
        return v == self.infinity

    @cached_property
    def finite_array(self) -> np.ndarray:
        return np.array([self.points[v] for v in self.finite_vertices], dtype=complex)

    @cached_property
    def center(self) -> complex:
        pts = self.finite_array
        return complex(
            (pts.real.max() + pts.real.min()) / 2.0,
            (pts.imag.max() + pts.imag.min()) / 2.0,
        )

    @cached_property
    def scale(self) -> float:
        """Bounding-box extent of the finite points."""
        pts = self.finite_array
        extent = max(np.ptp(pts.real), np.ptp(pts.imag))
        return float(extent) if extent > 0 else 1.0

    @cached_property
    def normalized(self) -> tuple[SpherePoint, ...]:
        """Coordinates mapped into the unit box; None at infinity."""
        out: list[SpherePoint] = []
        for v, z in enumerate(self.points):
            if v == self.infinity:
                out.append(None)
            else:
                w = (z - self.center) / self.scale
                out.append((w.real, w.imag))
        return tuple(out)

    def min_separation(self) -> float:
        pts = self.finite_array
        diffs = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(diffs, np.inf)
        return float(diffs.min())

    def to_dict(self) -> dict:
        points = [
            [0.0, 0.0] if v == self.infinity else [z.real, z.imag]
            for v, z in enumerate(self.points)
        ]
        payload: dict = {"points": points, "fixed": list(self.fixed)}
        if self.infinity is not None:
            payload["infinity"] = self.infinity
        return payload


def mobius_apply(
    config: PointConfig, a: complex, b: complex, c: complex, d: complex
) -> PointConfig:
    """
    w = (a z + b) / (c z + d) with ad − bc = 1.

    The vertex at infinity, if any, maps to a/c; when c = 0 it stays at
    infinity. A finite point sent to infinity raises PoleHit.
    """
    if abs(a * d - b * c - 1.0) > _SL2_TOLERANCE * max(1.0, abs(a * d), abs(b * c)):
        raise ValueError(f"Möbius coefficients must satisfy ad - bc = 1 (got {a * d - b * c})")

    images: list[complex] = []
    infinity: Optional[int] = config.infinity
    for v, z in enumerate(config.points):
        if v == config.infinity:
            if c == 0:
                images.append(complex(math.nan, math.nan))
            else:
                images.append(a / c)
                infinity = None
            continue
        denominator = c * z + d
        if denominator == 0:
            raise PoleHit(f"vertex {v} is mapped to infinity", vertex=v)
        images.append((a * z + b) / denominator)

    logger.debug("Applied Möbius map (%s, %s, %s, %s) to %d points", a, b, c, d, len(images))
    return PointConfig.create(images, config.fixed, infinity, config.name)


def random_sl2(rng: np.random.Generator, spread: float = 1.0) -> tuple[complex, complex, complex, complex]:
    """Random SL(2,C) element, normalised by the square root of its determinant."""
    while True:
        a, b, c, d = (
            complex(rng.normal(scale=spread), rng.normal(scale=spread)) for _ in range(4)
        )
        det = a * d - b * c
        if abs(det) > 1e-3:
            root = cmath.sqrt(det)
            return a / root, b / root, c / root, d / root


def _to_complex(point: PointLike) -> complex:
    if isinstance(point, numbers.Number):
        return complex(point)
    re, im = point
    return complex(float(re), float(im))
