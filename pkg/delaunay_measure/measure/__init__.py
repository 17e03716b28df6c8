"""The measure density 𝒟_T(z) by several routes, the conformal density H and collapse scaling."""

from .conformal import ConformalDensity, density_H, log_density_H, mobius_log_weight, vandermonde3
from .routes import (
    ROUTE_FINITE_DIFFERENCE,
    ROUTE_JACOBIAN,
    ROUTE_KAHLER,
    ROUTE_TREES,
    MeasureValue,
    RouteReport,
    angle_jacobian_fd,
    check_separation,
    evaluate_routes,
    jacobian_matrix,
    measure_finite_difference,
    measure_jacobian,
    measure_kahler,
    measure_trees,
    reduced_kahler,
    tree_sum,
    tree_term,
)
from .scaling import (
    DEFAULT_SCAN,
    ScalingResult,
    cluster_links,
    collapse_config,
    collapsed_triangulations,
    scaling_exponent,
    scan_cluster,
)

__all__ = [
    "ConformalDensity",
    "DEFAULT_SCAN",
    "MeasureValue",
    "ROUTE_FINITE_DIFFERENCE",
    "ROUTE_JACOBIAN",
    "ROUTE_KAHLER",
    "ROUTE_TREES",
    "RouteReport",
    "ScalingResult",
    "angle_jacobian_fd",
    "check_separation",
    "cluster_links",
    "collapse_config",
    "collapsed_triangulations",
    "density_H",
    "evaluate_routes",
    "jacobian_matrix",
    "log_density_H",
    "measure_finite_difference",
    "measure_jacobian",
    "measure_kahler",
    "measure_trees",
    "mobius_log_weight",
    "reduced_kahler",
    "scaling_exponent",
    "scan_cluster",
    "tree_sum",
    "tree_term",
    "vandermonde3",
]
