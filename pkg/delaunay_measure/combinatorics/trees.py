"""
Triangle-rooted spanning 3-trees
================================
Contracting the root triangle's three vertices to a single root turns the
free-vertex rows of J̃ (one entry 1/(z_v − z_v′) per edge at v) into a
matrix whose N × N minors are nonzero exactly on the spanning trees 𝓘 of
the contracted multigraph G′ (N + 1 vertices, 3N edges): the single
surviving bijection sends every free vertex to its edge towards the root.
Cauchy–Binet over [J̃; J̃̄]·E[:, 𝓔₀] then leaves one term per ordered pair
of edge-disjoint spanning trees (𝓘, 𝓘′), weighted by the signed E-minor ε.
The columns of E[:, 𝓔₀] span the kernel of R, so the minor over 𝓘 ∪ 𝓘′ is,
up to a global constant and sign, the complementary minor of R over
𝓘″ ∪ △. That one is nonzero exactly when every component of 𝓘″ ∪ △ has
a single cycle, of odd length, and it is ±2^k for k components. So |ε|
doubles with every extra component: ±1 when 𝓘″ is a third spanning tree
of G′, ±2 when it also splits off one odd-cycle component. Every such
pair carries weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional, Sequence

import networkx as nx
import numpy as np

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger

from ..errors import SingularSubmatrix, TooLarge
from ..exact import bareiss_determinant, permutation_parity
from ..mesh import Triangulation
from .basis import EdgeBasis, find_edge_basis
from .incidence import edge_edge_matrix

if TYPE_CHECKING:
    from ..operators import OperatorSet

logger = setup_logger(__name__)

ROOT = -1  # contracted triangle in G′

Arrow = tuple[int, int]  # (v, v′): edge oriented from v towards the triangle


@dataclass(frozen=True)
class SpanningThreeTree:
    first: tuple[int, ...]  # 𝓘, sorted edge indices
    second: tuple[int, ...]  # 𝓘′
    third: tuple[int, ...]  # 𝓘″, the edges left over
    sigma: tuple[tuple[int, int], ...]  # (free vertex, its outgoing edge in 𝓘)
    sigma_bar: tuple[tuple[int, int], ...]  # (free vertex, its outgoing edge in 𝓘′)
    arrows_first: tuple[Arrow, ...]
    arrows_second: tuple[Arrow, ...]
    epsilon: int = 0
    third_is_tree: bool = True

    def swapped(self) -> "SpanningThreeTree":
        """The tree with 𝓘 and 𝓘′ exchanged (ε is recomputed by the caller)."""
        return SpanningThreeTree(
            first=self.second,
            second=self.first,
            third=self.third,
            sigma=self.sigma_bar,
            sigma_bar=self.sigma,
            arrows_first=self.arrows_second,
            arrows_second=self.arrows_first,
            epsilon=0,
            third_is_tree=self.third_is_tree,
        )

    def with_epsilon(self, epsilon: int) -> "SpanningThreeTree":
        return SpanningThreeTree(
            first=self.first,
            second=self.second,
            third=self.third,
            sigma=self.sigma,
            sigma_bar=self.sigma_bar,
            arrows_first=self.arrows_first,
            arrows_second=self.arrows_second,
            epsilon=epsilon,
            third_is_tree=self.third_is_tree,
        )

    def to_dict(self, t: Triangulation) -> dict:
        return {
            "first": [list(t.edges[e]) for e in self.first],
            "second": [list(t.edges[e]) for e in self.second],
            "third": [list(t.edges[e]) for e in self.third],
            "arrows_first": [list(a) for a in self.arrows_first],
            "arrows_second": [list(a) for a in self.arrows_second],
            "epsilon": self.epsilon,
            "third_is_tree": self.third_is_tree,
        }


# ── Spanning trees ───────────────────────────────────────────────────────────

class _DisjointSets:
    def __init__(self, nodes) -> None:
        self.parent = {v: v for v in nodes}

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _connected(nodes, edges) -> bool:
    sets = _DisjointSets(nodes)
    merges = sum(sets.union(u, v) for u, v, _ in edges)
    return merges == len(nodes) - 1


def spanning_trees(graph: nx.MultiGraph) -> Iterator[frozenset]:
    """
    Every spanning tree of a (multi)graph, as a frozenset of edge keys.
    Include/exclude backtracking: an edge is only excluded while the graph
    stays connected without it, so every leaf of the search is a tree.
    """
    nodes = list(graph.nodes)
    edges = [(u, v, k) for u, v, k in graph.edges(keys=True) if u != v]
    need = len(nodes) - 1
    if need < 0 or not _connected(nodes, edges):
        return

    def walk(i: int, chosen: list, sets: _DisjointSets) -> Iterator[frozenset]:
        if len(chosen) == need:
            yield frozenset(k for _, _, k in chosen)
            return
        if i == len(edges):
            return
        u, v, k = edges[i]
        if sets.find(u) != sets.find(v):
            branch = _DisjointSets(nodes)
            branch.parent = dict(sets.parent)
            branch.union(u, v)
            yield from walk(i + 1, chosen + [edges[i]], branch)
        if _connected(nodes, chosen + edges[i + 1:]):
            yield from walk(i + 1, chosen, sets)

    yield from walk(0, [], _DisjointSets(nodes))


def kirchhoff_count(graph: nx.MultiGraph) -> int:
    """Number of spanning trees by the matrix-tree theorem."""
    if graph.number_of_nodes() <= 1:
        return 1
    laplacian = nx.laplacian_matrix(graph, weight=None).toarray().astype(float)
    return int(round(np.linalg.det(laplacian[1:, 1:])))


# ── 3-trees ──────────────────────────────────────────────────────────────────

def contracted_graph(t: Triangulation, triangle: Sequence[int]) -> nx.MultiGraph:
    """G′: the triangle's vertices merged into ROOT, its edges dropped."""
    corners = set(triangle)
    g = nx.MultiGraph()
    g.add_node(ROOT)
    g.add_nodes_from(v for v in range(t.n_vertices) if v not in corners)
    for e, (u, v) in enumerate(t.edges):
        if u in corners and v in corners:
            continue
        g.add_edge(ROOT if u in corners else u, ROOT if v in corners else v, key=e)
    return g


def _orient(t: Triangulation, graph: nx.MultiGraph, tree: frozenset) -> tuple[dict[int, int], list[Arrow]]:
    """Outgoing edge of every free vertex on its path to ROOT, and the arrows."""
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for u, v, k in graph.edges(keys=True):
        if k in tree:
            adjacency.setdefault(u, []).append((v, k))
            adjacency.setdefault(v, []).append((u, k))
    outgoing: dict[int, int] = {}
    arrows: list[Arrow] = []
    frontier = [ROOT]
    seen = {ROOT}
    while frontier:
        node = frontier.pop()
        for other, k in adjacency.get(node, []):
            if other in seen:
                continue
            seen.add(other)
            outgoing[other] = k
            a, b = t.edges[k]
            arrows.append((other, b if a == other else a))
            frontier.append(other)
    return outgoing, sorted(arrows)


def _triangle_vertices(t: Triangulation, triangle: Optional[int]) -> tuple[int, int, int]:
    if triangle is None:
        triangle = t.fixed_face
    if triangle is None:
        raise ValueError("the fixed vertices do not form a face; pass the root triangle explicitly")
    return t.faces[triangle]


def enumerate_3trees(
    t: Triangulation,
    triangle: Optional[int] = None,
    basis: Optional[EdgeBasis] = None,
    max_vertices: Optional[int] = None,
) -> list[SpanningThreeTree]:
    """
    Every ordered pair of edge-disjoint spanning trees of G′ whose E-minor
    against `basis` (by default the canonical basis around the triangle)
    is nonzero, with that minor as ε. Pairs are screened by the odd-cycle
    test on 𝓘″ ∪ △ before the exact minor is taken.
    """
    limit = max_vertices if max_vertices is not None else get_numeric_settings().max_tree_vertices
    n_free = t.n_vertices - 3
    if n_free > limit:
        raise TooLarge(f"3-tree enumeration is limited to N <= {limit}, got N = {n_free}", n=n_free, limit=limit)

    corners = _triangle_vertices(t, triangle)
    graph = contracted_graph(t, corners)
    triangle_edges = [e for e, (u, v) in enumerate(t.edges) if u in corners and v in corners]
    if basis is None:
        basis = find_edge_basis(t, t.find_face(corners))
    e_matrix = edge_edge_matrix(t)
    free = sorted(v for v in range(t.n_vertices) if v not in corners)

    found: list[SpanningThreeTree] = []
    for first in spanning_trees(graph):
        rest = graph.copy()
        rest.remove_edges_from([(u, v, k) for u, v, k in graph.edges(keys=True) if k in first])
        leftover = frozenset(k for _, _, k in rest.edges(keys=True))
        out_first, arrows_first = _orient(t, graph, first)
        for second in spanning_trees(rest):
            third = leftover - second
            if not _odd_cycle_forest(t, [*third, *triangle_edges]):
                continue
            out_second, arrows_second = _orient(t, graph, second)
            tree = SpanningThreeTree(
                first=tuple(sorted(first)),
                second=tuple(sorted(second)),
                third=tuple(sorted(third)),
                third_is_tree=_is_spanning_tree(graph, third),
                sigma=tuple((v, out_first[v]) for v in free),
                sigma_bar=tuple((v, out_second[v]) for v in free),
                arrows_first=tuple(arrows_first),
                arrows_second=tuple(arrows_second),
            )
            epsilon = _signed_minor(tree, basis, e_matrix)
            if epsilon == 0:
                continue
            found.append(tree.with_epsilon(epsilon))

    logger.info(
        "Enumerated %d weighted spanning-tree pairs (N=%d, %d with a tree left over)",
        len(found),
        n_free,
        sum(f.third_is_tree for f in found),
    )
    return found


def _is_spanning_tree(graph: nx.MultiGraph, keys: frozenset) -> bool:
    nodes = list(graph.nodes)
    if len(keys) != len(nodes) - 1:
        return False
    return _connected(nodes, [(u, v, k) for u, v, k in graph.edges(keys=True) if k in keys])


def _odd_cycle_forest(t: Triangulation, edges: Sequence[int]) -> bool:
    """Every component of (all vertices, edges) has exactly one cycle, of odd length."""
    parent = list(range(t.n_vertices))
    parity = [0] * t.n_vertices  # parity of the path to the parent
    cycles = [0] * t.n_vertices
    odd = [True] * t.n_vertices

    def find(v: int) -> tuple[int, int]:
        flip = 0
        while parent[v] != v:
            flip ^= parity[v]
            v = parent[v]
        return v, flip

    for e in edges:
        a, b = t.edges[e]
        (ra, pa), (rb, pb) = find(a), find(b)
        if ra == rb:
            cycles[ra] += 1
            odd[ra] = odd[ra] and pa == pb
            continue
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ 1
        cycles[rb] += cycles[ra]
        odd[rb] = odd[rb] and odd[ra]

    roots = {find(v)[0] for v in range(t.n_vertices)}
    return all(cycles[r] == 1 and odd[r] for r in roots)


def _signed_minor(tree: SpanningThreeTree, basis: EdgeBasis, e_matrix: np.ndarray) -> int:
    rows = [e for _, e in tree.sigma] + [e for _, e in tree.sigma_bar]
    ordered = sorted(rows)
    parity = permutation_parity([ordered.index(e) for e in rows])
    sub = [[int(e_matrix[r, c]) for c in basis.edges] for r in ordered]
    return int(parity * bareiss_determinant(sub))


def _epsilon(tree: SpanningThreeTree, basis: EdgeBasis, e_matrix: np.ndarray) -> int:
    epsilon = _signed_minor(tree, basis, e_matrix)
    if epsilon == 0:
        raise SingularSubmatrix(
            "E restricted to 𝓘 ∪ 𝓘′ × 𝓔₀ is singular",
            first=tree.first,
            second=tree.second,
        )
    return epsilon


def sign_epsilon(
    tree: SpanningThreeTree,
    basis: EdgeBasis,
    ops: Optional["OperatorSet"] = None,
) -> int:
    """
    ε(𝓕) = (−1)^(σ,σ̄) · det E[𝓘 ∪ 𝓘′, 𝓔₀], where the parity is that of the
    row order σ(v₁) … σ(v_N), σ̄(v₁) … σ̄(v_N) against the global edge order.
    """
    e_matrix = ops.E if ops is not None else edge_edge_matrix(basis.triangulation)
    return _epsilon(tree, basis, e_matrix)
