"""
Conformal density H
===================
Removing any three distinct vertices a, b, c from D and dividing by the
squared Vandermonde |Δ₃|² gives a function independent of the triple,
of weight (1, 1) at every point under Möbius maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import SingularMatrix
from ..mesh import PointConfig
from .routes import reduced_kahler


def vandermonde3(za: complex, zb: complex, zc: complex) -> complex:
    return (za - zb) * (zb - zc) * (zc - za)


@dataclass(frozen=True)
class ConformalDensity:
    log_value: float
    triple: tuple[int, int, int]

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def to_dict(self) -> dict:
        return {"triple": list(self.triple), "log_H": self.log_value, "H": self.value}


def log_density_H(d: np.ndarray, config: PointConfig, triple: Sequence[int]) -> ConformalDensity:
    a, b, c = (int(v) for v in triple)
    if len({a, b, c}) != 3:
        raise ValueError(f"need three distinct vertices, got {(a, b, c)}")
    if any(config.is_infinite(v) for v in (a, b, c)):
        raise ValueError("H needs three finite vertices")
    vdm = vandermonde3(*(config.points[v] for v in (a, b, c)))

    reduced = reduced_kahler(d, (a, b, c))
    if reduced.shape[0] == 0:
        return ConformalDensity(-2.0 * math.log(abs(vdm)), (a, b, c))
    sign, logdet = np.linalg.slogdet(reduced)
    if not math.isfinite(logdet) or complex(sign).real <= 0:
        raise SingularMatrix("reduced Kähler matrix is not positive definite", triple=(a, b, c))
    return ConformalDensity(float(logdet) - 2.0 * math.log(abs(vdm)), (a, b, c))


def density_H(d: np.ndarray, config: PointConfig, a: int, b: int, c: int) -> float:
    """H = det(D without a, b, c) / |Δ₃(z_a, z_b, z_c)|²."""
    return log_density_H(d, config, (a, b, c)).value


def mobius_log_weight(config: PointConfig, c: complex, d: complex) -> float:
    """log |Π_i w′(z_i)|² = −4 Σ_i log|c z_i + d| over the finite vertices."""
    return float(-4.0 * sum(math.log(abs(c * z + d)) for z in config.finite_array))
