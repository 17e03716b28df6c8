"""
Special functions of hyperbolic volume
======================================
Clausen's Cl₂, the Lobachevsky–Milnor function Л(α) = ½Cl₂(2α), the
Bloch–Wigner function D(z) and the dilogarithm Li₂(z).

Cl₂ uses its Bernoulli expansion about 0 after reducing the argument to
(−π, π] and folding |θ| > π/2 back with the duplication formula; the
series converges for |θ| < 2π and 30 terms give full double precision on
|θ| ≤ π. Li₂ uses the Bernoulli series in
u = −log(1 − z) after moving z to |z| ≤ 1, Re z ≤ 1/2 with the reflection
and inversion formulas. D(z) is built from Л alone; the Li₂ route is kept
as an independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import bernoulli, factorial

from ..errors import SingularArgument

ArrayLike = Union[float, np.ndarray]

_TERMS = 30
_PI2_6 = math.pi ** 2 / 6


@lru_cache(maxsize=1)
def _clausen_coefficients() -> np.ndarray:
    """|B_2k| / (2k (2k+1)!) for k = 1.._TERMS."""
    b = bernoulli(2 * _TERMS)
    k = np.arange(1, _TERMS + 1)
    return np.abs(b[2 * k]) / (2 * k * factorial(2 * k + 1, exact=False))


@lru_cache(maxsize=1)
def _dilog_coefficients() -> np.ndarray:
    """B_n / (n+1)! for n = 0..2·_TERMS."""
    n = np.arange(0, 2 * _TERMS + 1)
    return bernoulli(2 * _TERMS)[n] / factorial(n + 1, exact=False)


def reduce_angle(theta: ArrayLike) -> ArrayLike:
    """Representative of θ modulo 2π in (−π, π]."""
    reduced = np.asarray(theta, dtype=float) - 2.0 * np.pi * np.round(np.asarray(theta, dtype=float) / (2.0 * np.pi))
    reduced = np.where(reduced <= -np.pi, reduced + 2.0 * np.pi, reduced)
    return reduced


def _clausen_series(x: np.ndarray) -> np.ndarray:
    """Bernoulli expansion of Cl₂ about 0, for |x| ≤ π."""
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(ax > 0, x * np.log(np.where(ax > 0, ax, 1.0)), 0.0)
    x2 = x * x
    series = np.zeros_like(x)
    for c in _clausen_coefficients()[::-1]:
        series = series * x2 + c
    value = x - log_term + series * x2 * x
    return value


def clausen(theta: ArrayLike) -> ArrayLike:
    """
    Cl₂(θ) = −∫₀^θ log|2 sin(t/2)| dt; odd and 2π-periodic.

    For |θ| > π/2 the duplication formula Cl₂(π − u) = Cl₂(u) − ½Cl₂(2u)
    moves the series to u = π − |θ|, so Cl₂(π) is exactly 0.
    """
    x = np.asarray(reduce_angle(theta), dtype=float)
    ax = np.abs(x)
    u = np.pi - ax
    folded = np.sign(x) * (_clausen_series(u) - 0.5 * _clausen_series(2.0 * u))
    value = np.where(ax > np.pi / 2, folded, _clausen_series(x))
    return float(value) if np.ndim(value) == 0 else value


def lobachevsky(alpha: ArrayLike) -> ArrayLike:
    """Л(α) = −∫₀^α log|2 sin t| dt; odd and π-periodic."""
    value = 0.5 * clausen(2.0 * np.asarray(alpha, dtype=float))
    return float(value) if np.ndim(value) == 0 else value


def lobachevsky_derivative(alpha: ArrayLike) -> ArrayLike:
    """Л′(α) = −log|2 sin α|."""
    value = -np.log(np.abs(2.0 * np.sin(np.asarray(alpha, dtype=float))))
    return float(value) if np.ndim(value) == 0 else value


def _check_argument(z: complex) -> complex:
    z = complex(z)
    if not cmath.isfinite(z):
        raise SingularArgument(f"argument {z} is not finite", z=z)
    if z == 0 or z == 1:
        raise SingularArgument(f"Bloch–Wigner function is singular at {z}", z=z)
    return z


def bloch_wigner(z: complex) -> float:
    """
    D(z) = Im Li₂(z) + log|z|·Arg(1 − z), evaluated as
    Л(Arg z) + Л(Arg 1/(1−z)) + Л(Arg(1 − 1/z)).

    For z = (z₃ − z₁)/(z₂ − z₁) this is the volume of the ideal tetrahedron
    over the triangle, positive for counterclockwise triangles.
    """
    z = _check_argument(z)
    return float(
        lobachevsky(cmath.phase(z))
        + lobachevsky(cmath.phase(1.0 / (1.0 - z)))
        + lobachevsky(cmath.phase(1.0 - 1.0 / z))
    )


def _dilog_series(z: complex) -> complex:
    u = -cmath.log(1.0 - z)
    total = 0j
    for c in _dilog_coefficients()[::-1]:
        total = total * u + c
    return total * u


def dilogarithm(z: complex) -> complex:
    """Principal branch of Li₂(z) = −∫₀^z log(1 − t)/t dt."""
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(_PI2_6)
    if abs(z) > 1.0:
        log_minus = cmath.log(-z)
        return -_PI2_6 - 0.5 * log_minus * log_minus - dilogarithm(1.0 / z)
    if z.real > 0.5:
        return _PI2_6 - cmath.log(z) * cmath.log(1.0 - z) - _dilog_series(1.0 - z)
    return _dilog_series(z)


def bloch_wigner_dilog(z: complex) -> float:
    """D(z) straight from its definition through Li₂."""
    z = _check_argument(z)
    return float(dilogarithm(z).imag + math.log(abs(z)) * cmath.phase(1.0 - z))
