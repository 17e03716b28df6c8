"""
Measure density routes
======================
𝒟_T(z) is evaluated four ways:

* jacobian:  (2/i)^N det[J; J̄] over the free vertices × 𝓔₀
* kahler:    2^N det D′, D′ = D without the fixed rows and columns
* trees:     (1/2i)^N Σ_𝓕 ε(𝓕) Π_𝓘 1/(z_v − z_v′) Π_𝓘′ 1/(z̄_v − z̄_v′)
* finite-difference: det ∂θ_𝓔₀/∂(x, y) from central differences of θ

Determinants are kept as (log-magnitude, unit phase) pairs so large N does
not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger
from common.utils.timer import BlockTimer

from ..combinatorics import EdgeBasis, SpanningThreeTree, enumerate_3trees
from ..errors import CoincidingPoints, SingularMatrix, TooLarge
from ..mesh import PointConfig, Triangulation, mean_edge_length
from ..operators import OperatorSet

logger = setup_logger(__name__)

ROUTE_JACOBIAN = "jacobian"
ROUTE_KAHLER = "kahler"
ROUTE_TREES = "trees"
ROUTE_FINITE_DIFFERENCE = "finite-difference"

# central differences of θ carry an O(h²) error
FD_TOLERANCE = 1e-6


@dataclass(frozen=True)
class MeasureValue:
    log_magnitude: float
    phase: complex  # unit complex number; ±1 for a real value
    route: str
    n_free: int = 0

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_magnitude)

    @property
    def value(self) -> complex:
        return self.phase * self.magnitude

    @property
    def sign(self) -> int:
        return 1 if self.phase.real >= 0 else -1

    def relative_difference(self, other: "MeasureValue") -> float:
        """|𝒟₁/𝒟₂ − 1| on magnitudes."""
        return abs(math.expm1(self.log_magnitude - other.log_magnitude))

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "n_free": self.n_free,
            "log_magnitude": self.log_magnitude,
            "magnitude": self.magnitude if self.log_magnitude < 700 else None,
            "phase": [self.phase.real, self.phase.imag],
        }


def _from_slogdet(sign: complex, logdet: float, scale: complex, n: int, route: str) -> MeasureValue:
    """(2/i)^N-style prefactor `scale` applied to a determinant in log form."""
    if not math.isfinite(logdet):
        raise SingularMatrix(f"{route} determinant vanished", route=route, n_free=n)
    phase = complex(sign) * (scale / abs(scale)) ** n
    return MeasureValue(
        log_magnitude=float(logdet) + n * math.log(abs(scale)),
        phase=phase / abs(phase),
        route=route,
        n_free=n,
    )


def check_separation(config: PointConfig, tol: Optional[float] = None) -> None:
    tol = tol if tol is not None else get_numeric_settings().tol_coincide
    threshold = tol * config.scale
    finite = config.finite_vertices
    pts = config.finite_array
    for i, j in combinations(range(len(finite)), 2):
        if abs(pts[i] - pts[j]) < threshold:
            raise CoincidingPoints(
                f"vertices {finite[i]} and {finite[j]} are closer than {threshold:.3e}",
                vertices=(finite[i], finite[j]),
                distance=float(abs(pts[i] - pts[j])),
            )


# ── Jacobian ─────────────────────────────────────────────────────────────────

def jacobian_matrix(ops: OperatorSet, basis: Optional[EdgeBasis] = None) -> np.ndarray:
    """[J; J̄] restricted to free vertices × 𝓔₀ (2N × 2N)."""
    basis = basis if basis is not None else ops.basis
    free = list(ops.triangulation.config.free)
    cols = list(basis.edges)
    return np.vstack([ops.J[np.ix_(free, cols)], ops.J_bar[np.ix_(free, cols)]])


def measure_jacobian(ops: OperatorSet, basis: Optional[EdgeBasis] = None) -> MeasureValue:
    """(2/i)^N det[J; J̄] over the free vertices and the basis edges."""
    config = ops.triangulation.config
    check_separation(config)
    n = config.n_free
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, ROUTE_JACOBIAN, 0)
    sign, logdet = np.linalg.slogdet(jacobian_matrix(ops, basis))
    return _from_slogdet(sign, logdet, 2 / 1j, n, ROUTE_JACOBIAN)


# ── Kähler ───────────────────────────────────────────────────────────────────

def reduced_kahler(d: np.ndarray, removed: Sequence[int]) -> np.ndarray:
    keep = [v for v in range(d.shape[0]) if v not in set(removed)]
    return d[np.ix_(keep, keep)]


def measure_kahler(d: np.ndarray, fixed: Sequence[int], config: Optional[PointConfig] = None) -> MeasureValue:
    """2^N det D′ with the three fixed rows and columns removed."""
    if len(set(fixed)) != 3:
        raise ValueError(f"need three distinct fixed vertices, got {tuple(fixed)}")
    if config is not None:
        check_separation(config)
    reduced = reduced_kahler(d, fixed)
    n = reduced.shape[0]
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, ROUTE_KAHLER, 0)
    sign, logdet = np.linalg.slogdet(reduced)
    return _from_slogdet(sign, logdet, 2.0, n, ROUTE_KAHLER)


# ── Trees ────────────────────────────────────────────────────────────────────

def _arrow_factor(config: PointConfig, v: int, w: int) -> complex:
    if config.is_infinite(v) or config.is_infinite(w):
        return 0j
    return 1.0 / (config.points[v] - config.points[w])


def tree_term(config: PointConfig, tree: SpanningThreeTree) -> complex:
    """ε Π_𝓘 1/(z_v − z_v′) Π_𝓘′ 1/(z̄_v − z̄_v′) for one 3-tree."""
    term = complex(tree.epsilon)
    for v, w in tree.arrows_first:
        term *= _arrow_factor(config, v, w)
    for v, w in tree.arrows_second:
        term *= _arrow_factor(config, v, w).conjugate()
    return term


def tree_sum(t: Triangulation, trees: Sequence[SpanningThreeTree]) -> complex:
    """Raw Σ_𝓕 of tree terms, before the (1/2i)^N factor."""
    terms = [tree_term(t.config, f) for f in trees]
    return complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))


def measure_trees(
    t: Triangulation,
    triangle: Optional[int] = None,
    trees: Optional[Sequence[SpanningThreeTree]] = None,
) -> MeasureValue:
    check_separation(t.config)
    if trees is None:
        trees = enumerate_3trees(t, triangle)
    n = t.n_vertices - 3
    raw = tree_sum(t, trees)
    if raw == 0:
        raise SingularMatrix("the 3-tree sum vanished", route=ROUTE_TREES, n_free=n)
    scaled = raw * (1 / 2j) ** n
    if abs(scaled.imag) > 1e-10 * abs(scaled):
        logger.warning("3-tree sum is not real: %s", scaled)
    return MeasureValue(
        log_magnitude=math.log(abs(raw)) - n * math.log(2.0),
        phase=scaled / abs(scaled),
        route=ROUTE_TREES,
        n_free=n,
    )


# ── Finite differences ───────────────────────────────────────────────────────

def angle_jacobian_fd(t: Triangulation, basis: EdgeBasis, h: Optional[float] = None) -> np.ndarray:
    """∂θ_𝓔₀/∂(x_v, y_v) over the free vertices, x block then y block."""
    config = t.config
    free = list(config.free)
    cols = list(basis.edges)
    out = np.zeros((2 * len(free), len(cols)))
    fd_step = get_numeric_settings().fd_step
    for row, v in enumerate(free):
        step = h if h is not None else fd_step * mean_edge_length(t, [v])
        for offset, direction in ((0, 1.0), (len(free), 1j)):
            plus = t.with_config(config.moved(v, config.points[v] + step * direction)).thetas
            minus = t.with_config(config.moved(v, config.points[v] - step * direction)).thetas
            out[row + offset] = (plus[cols] - minus[cols]) / (2.0 * step)
    return out


def measure_finite_difference(t: Triangulation, basis: EdgeBasis, h: Optional[float] = None) -> MeasureValue:
    check_separation(t.config)
    n = t.config.n_free
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, ROUTE_FINITE_DIFFERENCE, 0)
    sign, logdet = np.linalg.slogdet(angle_jacobian_fd(t, basis, h))
    return _from_slogdet(sign, logdet, 1.0, n, ROUTE_FINITE_DIFFERENCE)


# ── All routes ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RouteReport:
    values: tuple[MeasureValue, ...]
    tolerance: float
    fd_tolerance: float = FD_TOLERANCE

    def _split(self) -> tuple[list[MeasureValue], list[MeasureValue]]:
        exact = [v for v in self.values if v.route != ROUTE_FINITE_DIFFERENCE]
        approximate = [v for v in self.values if v.route == ROUTE_FINITE_DIFFERENCE]
        return exact, approximate

    @property
    def max_disagreement(self) -> float:
        exact, _ = self._split()
        return max((a.relative_difference(b) for a, b in combinations(exact, 2)), default=0.0)

    @property
    def fd_disagreement(self) -> float:
        exact, approximate = self._split()
        return max((a.relative_difference(b) for a in approximate for b in exact), default=0.0)

    @property
    def agree(self) -> bool:
        return self.max_disagreement < self.tolerance and self.fd_disagreement < self.fd_tolerance

    def by_route(self, route: str) -> MeasureValue:
        for value in self.values:
            if value.route == route:
                return value
        raise KeyError(route)

    def to_dict(self) -> dict:
        return {
            "routes": [v.to_dict() for v in self.values],
            "max_disagreement": self.max_disagreement,
            "tolerance": self.tolerance,
            "fd_disagreement": self.fd_disagreement,
            "agree": self.agree,
        }


def evaluate_routes(
    ops: OperatorSet,
    include_trees: bool = True,
    include_fd: bool = False,
    tolerance: Optional[float] = None,
) -> RouteReport:
    """
    Every computable route on one operator set. The tree route is skipped
    when N exceeds the enumeration guard or the fixed vertices are not a face.
    """
    t = ops.triangulation
    tolerance = tolerance if tolerance is not None else get_numeric_settings().tol_agree
    values: list[MeasureValue] = []
    with BlockTimer(f"measure routes (N={t.config.n_free})"):
        values.append(measure_jacobian(ops))
        values.append(measure_kahler(ops.D, t.config.fixed, t.config))
        if include_trees and t.fixed_face is not None:
            try:
                values.append(measure_trees(t, t.fixed_face))
            except TooLarge as exc:
                logger.info("Skipping the tree route: %s", exc.message)
        if include_fd:
            values.append(measure_finite_difference(t, ops.basis))

    report = RouteReport(values=tuple(values), tolerance=tolerance)
    if report.agree:
        logger.info("Routes agree: %s (max rel diff %.2e)", ", ".join(v.route for v in values), report.max_disagreement)
    else:
        logger.warning("Measure routes disagree: max relative difference %.3e", report.max_disagreement)
    return report