from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from common.utils.logging_setup import setup_logger

from .config import PointConfig

logger = setup_logger(__name__)

Face = tuple[int, int, int]
Edge = tuple[int, int]


def canonical_face(face: Sequence[int]) -> Face:
    """Rotate so the smallest vertex comes first; orientation is kept."""
    a, b, c = face
    k = min(range(3), key=lambda i: face[i])
    rotated = (face[k], face[(k + 1) % 3], face[(k + 2) % 3])
    if len({a, b, c}) != 3:
        raise ValueError(f"face with repeated vertex: {tuple(face)}")
    return rotated


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Triangulation:
    """
    Closed triangulated sphere over a PointConfig, stored as half-edges.

    Half-edge h lives in face h // 3 as its (h % 3)-th side, so origin, next
    and prev are arithmetic; twins are looked up once. Faces are positively
    oriented on the sphere: counterclockwise in the plane, except the faces
    exterior to the convex hull, which are clockwise (fixed-face convention)
    or pass through the vertex at infinity.

    Edges are numbered in the global order sorted by (min vertex, max vertex).
    """

    config: PointConfig
    faces: tuple[Face, ...]

    @classmethod
    def from_faces(cls, config: PointConfig, faces: Iterable[Sequence[int]]) -> "Triangulation":
        canonical = tuple(sorted(canonical_face(f) for f in faces))
        t = cls(config=config, faces=canonical)
        t._check_closed_surface()
        return t

    # ── Counts ───────────────────────────────────────────────────────────

    @property
    def n_vertices(self) -> int:
        return self.config.n_vertices

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_halfedges(self) -> int:
        return 3 * len(self.faces)

    # ── Half-edge navigation ─────────────────────────────────────────────

    def origin(self, h: int) -> int:
        return self.faces[h // 3][h % 3]

    def target(self, h: int) -> int:
        return self.faces[h // 3][(h % 3 + 1) % 3]

    def apex(self, h: int) -> int:
        """Vertex of h's face opposite to h."""
        return self.faces[h // 3][(h % 3 + 2) % 3]

    @staticmethod
    def next(h: int) -> int:
        return 3 * (h // 3) + (h % 3 + 1) % 3

    @staticmethod
    def prev(h: int) -> int:
        return 3 * (h // 3) + (h % 3 + 2) % 3

    @staticmethod
    def face_of(h: int) -> int:
        return h // 3

    @cached_property
    def _directed(self) -> dict[Edge, int]:
        return {(self.origin(h), self.target(h)): h for h in range(self.n_halfedges)}

    @cached_property
    def twins(self) -> tuple[int, ...]:
        directed = self._directed
        return tuple(directed[(self.target(h), self.origin(h))] for h in range(self.n_halfedges))

    def twin(self, h: int) -> int:
        return self.twins[h]

    def halfedge(self, u: int, v: int) -> Optional[int]:
        return self._directed.get((u, v))

    # ── Edges ────────────────────────────────────────────────────────────

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({edge_key(u, v) for (u, v) in self._directed}))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def halfedge_edge(self) -> tuple[int, ...]:
        index = self.edge_index
        return tuple(
            index[edge_key(self.origin(h), self.target(h))] for h in range(self.n_halfedges)
        )

    def edge_halfedges(self, e: int) -> tuple[int, int]:
        """(h, twin) with h running from the smaller to the larger endpoint."""
        u, v = self.edges[e]
        h = self._directed[(u, v)]
        return h, self.twins[h]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_index

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def same_combinatorics(self, other: "Triangulation") -> bool:
        return self.faces == other.faces

    # ── Vertex stars ─────────────────────────────────────────────────────

    @cached_property
    def _outgoing(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for h in range(self.n_halfedges):
            out.setdefault(self.origin(h), h)
        return out

    def vertex_halfedges(self, v: int, origin: int = 0) -> tuple[int, ...]:
        """
        Outgoing half-edges of v in counterclockwise order, starting from the
        one towards the smallest neighbour and rotated by `origin` steps.
        """
        start = self._outgoing[v]
        ring = [start]
        h = self.twin(self.prev(start))
        while h != start:
            ring.append(h)
            h = self.twin(self.prev(h))
        first = min(range(len(ring)), key=lambda i: self.target(ring[i]))
        k = (first + origin) % len(ring)
        return tuple(ring[k:] + ring[:k])

    def vertex_edges(self, v: int, origin: int = 0) -> tuple[int, ...]:
        return tuple(self.halfedge_edge[h] for h in self.vertex_halfedges(v, origin))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(self.target(h) for h in self.vertex_halfedges(v))

    def degree(self, v: int) -> int:
        return len(self.vertex_halfedges(v))

    @cached_property
    def vertex_faces(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {}
        for f, face in enumerate(self.faces):
            for v in face:
                table.setdefault(v, []).append(f)
        return {v: tuple(fs) for v, fs in table.items()}

    # ── Faces ────────────────────────────────────────────────────────────

    @cached_property
    def _face_lookup(self) -> dict[Face, int]:
        return {face: f for f, face in enumerate(self.faces)}

    def face_id(self, face: Sequence[int]) -> Optional[int]:
        """Index of the face with these vertices in this cyclic order."""
        return self._face_lookup.get(canonical_face(face))

    def find_face(self, vertices: Iterable[int]) -> Optional[int]:
        """Index of a face on this vertex set, in either orientation."""
        wanted = set(vertices)
        for f, face in enumerate(self.faces):
            if set(face) == wanted:
                return f
        return None

    def is_infinite_face(self, f: int) -> bool:
        return self.config.infinity in self.faces[f]

    def is_infinite_edge(self, e: int) -> bool:
        return self.config.infinity in self.edges[e]

    @cached_property
    def fixed_face(self) -> Optional[int]:
        return self.find_face(self.config.fixed)

    def face_halfedges(self, f: int) -> tuple[int, int, int]:
        return (3 * f, 3 * f + 1, 3 * f + 2)

    def face_edges(self, f: int) -> tuple[int, int, int]:
        return tuple(self.halfedge_edge[h] for h in self.face_halfedges(f))

    # ── Caches of geometric quantities ───────────────────────────────────

    @cached_property
    def thetas(self):
        from .geometry import compute_thetas

        return compute_thetas(self)

    @cached_property
    def geometries(self):
        from .geometry import compute_face_geometries

        return compute_face_geometries(self)

    # ── Editing ──────────────────────────────────────────────────────────

    def flip_edge(self, e: int) -> "Triangulation":
        """Whitehead move: replace edge (a, b) by the other quad diagonal (c, d)."""
        h, t = self.edge_halfedges(e)
        a, b = self.origin(h), self.target(h)
        c, d = self.apex(h), self.apex(t)
        if self.has_edge(c, d):
            raise ValueError(f"cannot flip edge {self.edges[e]}: diagonal ({c}, {d}) exists")

        removed = {self.face_of(h), self.face_of(t)}
        faces = [face for f, face in enumerate(self.faces) if f not in removed]
        faces += [(a, d, c), (d, b, c)]
        logger.debug("Flipped edge (%d, %d) -> (%d, %d)", a, b, c, d)
        return Triangulation.from_faces(self.config, faces)

    def with_config(self, config: PointConfig) -> "Triangulation":
        """Same combinatorics over moved points."""
        return Triangulation(config=config, faces=self.faces)

    # ── Validation ───────────────────────────────────────────────────────

    def _check_closed_surface(self) -> None:
        directed: set[Edge] = set()
        for face in self.faces:
            for k in range(3):
                step = (face[k], face[(k + 1) % 3])
                if step in directed:
                    raise ValueError(f"directed edge {step} used twice; faces are not coherently oriented")
                directed.add(step)
        for u, v in directed:
            if (v, u) not in directed:
                raise ValueError(f"edge ({u}, {v}) has no twin; surface is not closed")

        used = {v for face in self.faces for v in face}
        count = len(used)
        if len(self.edges) != 3 * (count - 2) or len(self.faces) != 2 * (count - 2):
            raise ValueError(
                f"Euler counts violated: V={count}, E={len(self.edges)}, F={len(self.faces)}"
            )
