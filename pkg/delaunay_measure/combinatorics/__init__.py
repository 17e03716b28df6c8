"""Incidence matrices, edge bases and triangle-rooted spanning 3-trees."""

from .basis import (
    BasisCheck,
    EdgeBasis,
    complement_determinant,
    count_dual_matchings,
    find_edge_basis,
    random_edge_basis,
)
from .incidence import dual_graph, edge_edge_matrix, incidence_matrix, primal_graph
from .trees import (
    ROOT,
    SpanningThreeTree,
    contracted_graph,
    enumerate_3trees,
    kirchhoff_count,
    sign_epsilon,
    spanning_trees,
)

__all__ = [
    "BasisCheck",
    "EdgeBasis",
    "ROOT",
    "SpanningThreeTree",
    "complement_determinant",
    "contracted_graph",
    "count_dual_matchings",
    "dual_graph",
    "edge_edge_matrix",
    "enumerate_3trees",
    "find_edge_basis",
    "incidence_matrix",
    "kirchhoff_count",
    "primal_graph",
    "random_edge_basis",
    "sign_epsilon",
    "spanning_trees",
]
