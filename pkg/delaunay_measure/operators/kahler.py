"""
Kähler matrix D
===============
D_{uv̄} = ∂²𝒜/∂z_u∂z̄_v splits into 3×3 face blocks. For a counterclockwise
face with angles α₁, α₂, α₃ and circumradius R the block is

    D(f) = −(2Δ₀(f) + iE(f)) / (8R²)

with Δ₀(f) the face's share of the cotangent Laplacian and E(f) the
Levi-Civita tensor. Clockwise faces enter with the opposite sign, faces
through infinity not at all.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigvalsh

from ..mesh import FaceGeom, Triangulation


def _ccw_block(cot: tuple[float, float, float], radius: float) -> np.ndarray:
    block = np.zeros((3, 3), dtype=complex)
    for j in range(3):
        after, before = (j + 1) % 3, (j + 2) % 3
        block[j, j] = cot[after] + cot[before]
        # the third vertex of the pair (j, after) is `before`, and vice versa
        block[j, after] = -cot[before] - 1j
        block[j, before] = -cot[after] + 1j
    return block / (8.0 * radius ** 2)


def kahler_face(g: FaceGeom) -> np.ndarray:
    """
    Signed contribution of one face to D, indexed in the face's vertex
    order. For a counterclockwise face this is the explicit cotangent form.
    """
    if g.is_infinite:
        return np.zeros((3, 3), dtype=complex)
    cot = g.cotangents()
    if g.area > 0:
        return _ccw_block(cot, g.circumradius)
    # clockwise: evaluate on the reversed order (0, 2, 1), map back, flip sign
    order = [0, 2, 1]
    reversed_block = _ccw_block(tuple(cot[k] for k in order), g.circumradius)
    block = np.empty((3, 3), dtype=complex)
    for a, i in enumerate(order):
        for b, j in enumerate(order):
            block[i, j] = reversed_block[a, b]
    return -block


def kahler_face_spectrum(g: FaceGeom) -> np.ndarray:
    """Eigenvalues of D(f) in ascending order; two vanish."""
    return eigvalsh(kahler_face(g))


def positive_eigenvalue(g: FaceGeom) -> float:
    """λ₃ = (cot α₁ + cot α₂ + cot α₃) / (4R²)."""
    return float(sum(g.cotangents()) / (4.0 * g.circumradius ** 2))


def kahler_assemble(t: Triangulation) -> np.ndarray:
    """D = Σ_f D(f) over all faces."""
    d = np.zeros((t.n_vertices, t.n_vertices), dtype=complex)
    for g in t.geometries:
        if g.is_infinite:
            continue
        index = np.array(g.vertices)
        d[np.ix_(index, index)] += kahler_face(g)
    return d


def cotangent_laplacian(t: Triangulation) -> np.ndarray:
    """
    Δ₀ with (Δ₀)_{uv} = ½(cot α + cot α′) over the angles facing edge uv in
    its finite faces and (Δ₀)_{uu} = −Σ_v (Δ₀)_{uv}.
    """
    lap = np.zeros((t.n_vertices, t.n_vertices), dtype=float)
    for g in t.geometries:
        if g.is_infinite:
            continue
        cot = g.cotangents()
        for k in range(3):
            u, v = g.vertices[(k + 1) % 3], g.vertices[(k + 2) % 3]
            lap[u, v] += 0.5 * cot[k]
            lap[v, u] += 0.5 * cot[k]
    lap[np.diag_indices_from(lap)] = -lap.sum(axis=1)
    return lap


def zero_modes(t: Triangulation) -> list[np.ndarray]:
    """
    Three vectors ψ with ψ·D = 0. In the fixed-face convention these are
    1, z and z² over the vertices; with a vertex at infinity the z² mode is
    replaced by the unit vector on that vertex.
    """
    config = t.config
    z = np.array([0j if config.is_infinite(v) else config.points[v] for v in range(t.n_vertices)])
    ones = np.array([0.0 if config.is_infinite(v) else 1.0 for v in range(t.n_vertices)], dtype=complex)
    if config.infinity is None:
        return [ones, z, z * z]
    unit = np.zeros(t.n_vertices, dtype=complex)
    unit[config.infinity] = 1.0
    return [ones, z, unit]


def min_eigenvalue_ratio(d: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix divided by its trace."""
    trace = float(np.real(np.trace(d)))
    if trace <= 0:
        return 0.0 if not np.any(d) else float("-inf")
    return float(eigvalsh(d)[0] / trace)
