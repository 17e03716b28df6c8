"""
Edge bases
==========
An edge basis 𝓔₀ is a set of 2N edges whose complement is a spanning
subgraph with exactly one cycle, of odd length. Equivalently the dual
edges of 𝓔₀ form a forest of two trees. The angles θ_e on 𝓔₀ are then free
coordinates for the configuration.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx
import numpy as np

from common.utils.logging_setup import setup_logger

from ..errors import NoEdgeBasis
from ..exact import bareiss_determinant
from ..mesh import Triangulation
from .incidence import dual_graph, edge_edge_matrix, incidence_matrix, primal_graph

logger = setup_logger(__name__)


@dataclass(frozen=True)
class BasisCheck:
    spanning_connected: bool
    cycle_count: int
    cycle_length: int
    complement_det: int  # det of R over vertices × complement
    dual_components: int
    dual_is_forest: bool

    @property
    def ok(self) -> bool:
        return (
            self.spanning_connected
            and self.cycle_count == 1
            and self.cycle_length % 2 == 1
            and abs(self.complement_det) == 2
            and self.dual_is_forest
            and self.dual_components == 2
        )


@dataclass(frozen=True)
class EdgeBasis:
    triangulation: Triangulation = field(repr=False, compare=False)
    edges: tuple[int, ...]
    complement: tuple[int, ...]
    cycle: tuple[int, ...]  # edges of the odd cycle of the complement
    root_face: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.edges)

    def projector(self) -> np.ndarray:
        """P₀: the 0/1 injection of 𝓔₀ into all edges, in global edge order."""
        p = np.zeros((self.triangulation.n_edges, len(self.edges)), dtype=np.int64)
        for column, e in enumerate(self.edges):
            p[e, column] = 1
        return p

    def check(self) -> BasisCheck:
        t = self.triangulation
        primal = primal_graph(t, self.complement)
        components = nx.number_connected_components(primal)
        cycles = primal.number_of_edges() - primal.number_of_nodes() + components

        cycle_length = 0
        if components == 1 and cycles == 1:
            cycle_length = len(nx.find_cycle(primal))

        dual = dual_graph(t, self.edges)
        dual_components = nx.number_connected_components(dual)
        dual_forest = dual.number_of_edges() == dual.number_of_nodes() - dual_components

        return BasisCheck(
            spanning_connected=components == 1,
            cycle_count=cycles,
            cycle_length=cycle_length,
            complement_det=int(complement_determinant(t, self.complement)),
            dual_components=dual_components,
            dual_is_forest=dual_forest,
        )


def _make_basis(t: Triangulation, complement: Iterable[int], cycle, root_face=None) -> EdgeBasis:
    rest = set(complement)
    return EdgeBasis(
        triangulation=t,
        edges=tuple(e for e in range(t.n_edges) if e not in rest),
        complement=tuple(sorted(rest)),
        cycle=tuple(sorted(cycle)),
        root_face=root_face,
    )


def find_edge_basis(t: Triangulation, f0: Optional[int] = None) -> EdgeBasis:
    """
    Canonical basis: the edges crossed by a breadth-first spanning tree of
    the dual graph with f₀ removed. The complement's cycle is ∂f₀.
    """
    if f0 is None:
        f0 = t.fixed_face if t.fixed_face is not None else 0
    faces = [f for f in range(t.n_faces) if f != f0]
    crossed: list[int] = []
    seen = {faces[0]}
    queue = deque([faces[0]])
    while queue:
        f = queue.popleft()
        for h in t.face_halfedges(f):
            g = t.face_of(t.twin(h))
            if g == f0 or g in seen:
                continue
            seen.add(g)
            crossed.append(t.halfedge_edge[h])
            queue.append(g)

    boundary = t.face_edges(f0)
    crossed_set = set(crossed)
    basis = EdgeBasis(
        triangulation=t,
        edges=tuple(sorted(crossed)),
        complement=tuple(e for e in range(t.n_edges) if e not in crossed_set),
        cycle=tuple(sorted(boundary)),
        root_face=f0,
    )
    logger.debug("Canonical edge basis around face %s: %s", t.faces[f0], basis.edges)
    return basis


def random_edge_basis(t: Triangulation, rng: np.random.Generator, max_attempts: int = 1000) -> EdgeBasis:
    """
    Random spanning tree (minimum spanning tree under random weights) plus
    one random extra edge, kept when the cycle it closes is odd.
    """
    graph = primal_graph(t)
    for attempt in range(1, max_attempts + 1):
        for u, v, key in graph.edges(keys=True):
            graph[u][v][key]["weight"] = float(rng.random())
        tree_edges = list(nx.minimum_spanning_edges(graph, keys=True, data=False))
        tree_keys = {key for _, _, key in tree_edges}
        spare = [e for e in range(t.n_edges) if e not in tree_keys]
        if not spare:
            break
        extra = spare[int(rng.integers(len(spare)))]

        tree = nx.Graph()
        tree.add_nodes_from(range(t.n_vertices))
        for u, v, key in tree_edges:
            tree.add_edge(u, v, key=key)
        a, b = t.edges[extra]
        path = nx.shortest_path(tree, a, b)
        if len(path) % 2 == 0:
            continue
        cycle = [tree[x][y]["key"] for x, y in zip(path, path[1:])] + [extra]
        logger.debug("Random edge basis accepted after %d attempts", attempt)
        return _make_basis(t, tree_keys | {extra}, cycle)

    raise NoEdgeBasis(
        f"no odd cycle-rooted spanning tree found in {max_attempts} attempts",
        attempts=max_attempts,
        n_vertices=t.n_vertices,
    )


def complement_determinant(t: Triangulation, edges: Iterable[int]) -> int:
    """Exact det of R over all vertices × the given edges: ±2 for an odd CRST, 0 for an even one."""
    columns = list(edges)
    r = incidence_matrix(t)
    if len(columns) != t.n_vertices:
        raise ValueError(f"need {t.n_vertices} edges for a square submatrix, got {len(columns)}")
    sub = [[int(r[v, e]) for e in columns] for v in range(t.n_vertices)]
    return int(bareiss_determinant(sub))


def count_dual_matchings(t: Triangulation, basis: EdgeBasis) -> int:
    """
    Perfect matchings of 𝓔₀ into pairs of edges that share a face. The
    dual forest admits exactly one, which is why det E₀ = 1.
    """
    e = edge_edge_matrix(t)
    edges = list(basis.edges)

    def count(remaining: tuple[int, ...]) -> int:
        if not remaining:
            return 1
        first, rest = remaining[0], remaining[1:]
        total = 0
        for k, partner in enumerate(rest):
            if e[first, partner] != 0:
                total += count(rest[:k] + rest[k + 1:])
        return total

    return count(tuple(edges))
