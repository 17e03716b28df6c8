"""Named point configurations used by the CLI, the identity suite and the tests."""

from __future__ import annotations

import cmath
import math
from typing import Callable, Optional

import numpy as np

from common.settings import CONVENTION_FIXED_FACE, CONVENTION_INFINITY

from .mesh import PointConfig

# side 1, so every circumradius is 1/√3
HEXAGON_CIRCUMRADIUS = 1.0 / math.sqrt(3.0)

OUTER_TRIANGLE = tuple(cmath.exp(1j * (math.pi / 2 + 2 * math.pi * k / 3)) for k in range(3))


def tetrahedron() -> PointConfig:
    """{0, 1, i, (1+i)/4}: one free vertex joined to the fixed triangle."""
    return PointConfig.create([0, 1, 1j, (1 + 1j) / 4], fixed=(0, 1, 2), name="tetrahedron")


def octahedron(inner: float = 0.3) -> PointConfig:
    """Outer fixed triangle with a reversed inner triangle of radius `inner`."""
    points = list(OUTER_TRIANGLE)
    points += [inner * cmath.exp(1j * (-math.pi / 2 + 2 * math.pi * k / 3)) for k in range(3)]
    return PointConfig.create(points, fixed=(0, 1, 2), name="octahedron")


def hexagon_patch() -> PointConfig:
    """
    Centre 0, unit hexagon 1 … 6 and the vertex at infinity 7, fixed
    (7, 1, 2). Six equilateral faces of side 1 around the centre.
    """
    points = [0j] + [cmath.exp(1j * math.pi * k / 3) for k in range(6)] + [0j]
    return PointConfig.create(points, fixed=(7, 1, 2), infinity=7, name="hexagon")


def random_config(
    n_free: int,
    rng: np.random.Generator,
    convention: str = CONVENTION_FIXED_FACE,
    min_separation: float = 0.02,
    name: Optional[str] = None,
) -> PointConfig:
    """
    N free points uniform in a disc. Fixed-face: inside the outer triangle
    OUTER_TRIANGLE (fixed 0, 1, 2). Infinity: vertex 0 at infinity and two
    more random points fixed.
    """
    finite_needed = n_free if convention == CONVENTION_FIXED_FACE else n_free + 2
    radius = 0.45 if convention == CONVENTION_FIXED_FACE else 1.0
    anchors = list(OUTER_TRIANGLE) if convention == CONVENTION_FIXED_FACE else []

    chosen: list[complex] = []
    while len(chosen) < finite_needed:
        r = radius * math.sqrt(rng.random())
        z = r * cmath.exp(2j * math.pi * rng.random())
        if all(abs(z - w) >= min_separation for w in anchors + chosen):
            chosen.append(z)

    label = name or f"random-{convention}-{n_free}"
    if convention == CONVENTION_FIXED_FACE:
        return PointConfig.create(anchors + chosen, fixed=(0, 1, 2), name=label)
    if convention != CONVENTION_INFINITY:
        raise ValueError(f"unknown convention {convention!r}")
    return PointConfig.create([0j] + chosen, fixed=(0, 1, 2), infinity=0, name=label)


FIXTURES: dict[str, Callable[[], PointConfig]] = {
    "tetrahedron": tetrahedron,
    "octahedron": octahedron,
    "hexagon": hexagon_patch,
}


def named_fixture(name: str) -> PointConfig:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
