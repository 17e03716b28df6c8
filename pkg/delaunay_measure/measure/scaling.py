"""
Collapse scaling
================
Shrinking a cluster of P free vertices towards a point, z_v → Z₀ + x(z_v − Z₀),
scales each 3-tree term of the measure as x^n with

    n = 2P − (#𝓘₀ + #𝓘′₀)

where 𝓘₀, 𝓘′₀ are the arrows of 𝓘, 𝓘′ joining two cluster vertices. The
2P counts the volume element of the cluster. n > 2 makes every term
integrable at the collapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from common.utils.logging_setup import setup_logger

from ..combinatorics import SpanningThreeTree, enumerate_3trees
from ..errors import CombinatoricsChanged
from ..mesh import PointConfig, Triangulation, delaunay_build

logger = setup_logger(__name__)

DEFAULT_SCAN = tuple(np.logspace(-2, -4, 9))


@dataclass(frozen=True)
class ScalingResult:
    cluster: tuple[int, ...]
    combinatorial: int
    fitted: float
    links_first: int
    links_second: int

    @property
    def saturated(self) -> bool:
        """#𝓘₀ + #𝓘′₀ reaches its maximum 2P − 3."""
        return self.links_first + self.links_second == 2 * len(self.cluster) - 3

    @property
    def integrable(self) -> bool:
        return self.combinatorial > 2

    def to_dict(self) -> dict:
        return {
            "cluster": list(self.cluster),
            "combinatorial": self.combinatorial,
            "fitted": self.fitted,
            "links_first": self.links_first,
            "links_second": self.links_second,
            "saturated": self.saturated,
        }


def _check_cluster(config: PointConfig, cluster: Iterable[int]) -> tuple[int, ...]:
    members = tuple(sorted(set(int(v) for v in cluster)))
    if len(members) < 2:
        raise ValueError("a collapsing cluster needs at least two vertices")
    bad = [v for v in members if v in config.fixed or not 0 <= v < config.n_vertices]
    if bad:
        raise ValueError(f"cluster vertices must be free, got {bad}")
    return members


def collapse_config(
    config: PointConfig,
    cluster: Iterable[int],
    x: float,
    center: Optional[complex] = None,
) -> PointConfig:
    """z_v → Z₀ + x(z_v − Z₀) on the cluster; Z₀ defaults to its centroid."""
    members = _check_cluster(config, cluster)
    z0 = center if center is not None else complex(np.mean([config.points[v] for v in members]))
    points = list(config.points)
    for v in members:
        points[v] = z0 + x * (points[v] - z0)
    return config.with_points(points)


def cluster_links(tree: SpanningThreeTree, cluster: Sequence[int]) -> tuple[int, int]:
    inside = set(cluster)
    first = sum(1 for v, w in tree.arrows_first if v in inside and w in inside)
    second = sum(1 for v, w in tree.arrows_second if v in inside and w in inside)
    return first, second


def _log_term(config: PointConfig, tree: SpanningThreeTree) -> float:
    """log |Π_{𝓘 ∪ 𝓘′} 1/(z_v − z_v′)|."""
    total = 0.0
    for v, w in tree.arrows_first + tree.arrows_second:
        total -= math.log(abs(config.points[v] - config.points[w]))
    return total


def collapsed_triangulations(
    config: PointConfig,
    cluster: Iterable[int],
    xs: Sequence[float] = DEFAULT_SCAN,
) -> list[Triangulation]:
    """Delaunay triangulations along the scan; raises when the edge set moves."""
    members = _check_cluster(config, cluster)
    built = [delaunay_build(collapse_config(config, members, x)) for x in xs]
    for x, t in zip(xs[1:], built[1:]):
        if not t.same_combinatorics(built[0]):
            raise CombinatoricsChanged(
                f"the triangulation changes between x={xs[0]:.1e} and x={x:.1e}",
                cluster=members,
                x=float(x),
            )
    return built


def scaling_exponent(
    config: PointConfig,
    cluster: Iterable[int],
    tree: SpanningThreeTree,
    xs: Sequence[float] = DEFAULT_SCAN,
    triangulations: Optional[Sequence[Triangulation]] = None,
) -> ScalingResult:
    """
    Combinatorial exponent of one 3-tree term and the log-log slope of
    x^{2P} |term| over the scan. `tree` must belong to the collapsed
    triangulation.
    """
    members = _check_cluster(config, cluster)
    if triangulations is None:
        triangulations = collapsed_triangulations(config, members, xs)
    tree_edges = set(tree.first) | set(tree.second) | set(tree.third)
    if len(tree_edges) != triangulations[0].n_edges - 3:
        raise ValueError("the 3-tree does not belong to the collapsed triangulation")

    links_first, links_second = cluster_links(tree, members)
    combinatorial = 2 * len(members) - (links_first + links_second)

    log_x = np.log(np.asarray(xs, dtype=float))
    log_density = np.array(
        [2 * len(members) * lx + _log_term(t.config, tree) for lx, t in zip(log_x, triangulations)]
    )
    fitted = float(np.polyfit(log_x, log_density, 1)[0])

    result = ScalingResult(members, combinatorial, fitted, links_first, links_second)
    if not result.integrable:
        logger.warning("Collapse exponent %d <= 2 for cluster %s", combinatorial, members)
    return result


def scan_cluster(
    config: PointConfig,
    cluster: Iterable[int],
    xs: Sequence[float] = DEFAULT_SCAN,
) -> list[ScalingResult]:
    """scaling_exponent for every 3-tree of the collapsed triangulation."""
    members = _check_cluster(config, cluster)
    triangulations = collapsed_triangulations(config, members, xs)
    t = triangulations[0]
    # terms with an arrow into infinity vanish identically
    trees = [
        f for f in enumerate_3trees(t, t.fixed_face)
        if not any(config.is_infinite(w) for _, w in f.arrows_first + f.arrows_second)
    ]
    results = [scaling_exponent(config, members, f, xs, triangulations) for f in trees]
    logger.info(
        "Cluster %s: %d trees, exponents %s",
        members,
        len(results),
        sorted({r.combinatorial for r in results}),
    )
    return results
