from __future__ import annotations

import networkx as nx
import numpy as np

from ..mesh import Triangulation


def incidence_matrix(t: Triangulation) -> np.ndarray:
    """R: vertices × edges, R[v, e] = 1 when v is an endpoint of e."""
    r = np.zeros((t.n_vertices, t.n_edges), dtype=np.int64)
    for e, (u, v) in enumerate(t.edges):
        r[u, e] = 1
        r[v, e] = 1
    return r


def edge_edge_matrix(t: Triangulation) -> np.ndarray:
    """
    E: edges × edges. Inside a face, E[e, e′] = +1 when e′ comes just
    before e in the face's positive cycle and −1 when it comes just after.
    Antisymmetric, and R·E = 0.
    """
    m = np.zeros((t.n_edges, t.n_edges), dtype=np.int64)
    edge_of = t.halfedge_edge
    for h in range(t.n_halfedges):
        e, following = edge_of[h], edge_of[t.next(h)]
        m[e, following] -= 1
        m[following, e] += 1
    return m


def primal_graph(t: Triangulation, edges=None) -> nx.MultiGraph:
    """Vertices of t joined by the chosen edges (all by default), keyed by edge index."""
    g = nx.MultiGraph()
    g.add_nodes_from(range(t.n_vertices))
    for e in (range(t.n_edges) if edges is None else edges):
        u, v = t.edges[e]
        g.add_edge(u, v, key=e)
    return g


def dual_graph(t: Triangulation, edges=None) -> nx.MultiGraph:
    """Faces of t joined across the chosen edges (all by default), keyed by edge index."""
    g = nx.MultiGraph()
    g.add_nodes_from(range(t.n_faces))
    for e in (range(t.n_edges) if edges is None else edges):
        h, twin = t.edge_halfedges(e)
        g.add_edge(t.face_of(h), t.face_of(twin), key=e)
    return g
