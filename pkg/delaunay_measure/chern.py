"""
Chern 2-forms of the vertices
=============================
Around a vertex v with incident edges e₁ … e_n in counterclockwise order,

    4π² ψ_v = −Σ_{k=2}^{n} Σ_{l<k} dθ_{e_k} ∧ dθ_{e_l}

A 2-form is stored as the antisymmetric matrix B with
ω = Σ_{i<j} B_ij dθ_i ∧ dθ_j, so ω^N / N! = Pf(B) times the top form.
Coefficients are kept for 4π²ψ, which are integers over all edges and
rationals once restricted to the basis 𝓔₀.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from pfapack.pfaffian import pfaffian as householder_pfaffian

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger

from .combinatorics import EdgeBasis, find_edge_basis
from .errors import OddDimension, TooLarge
from .exact import pfaffian_exact
from .mesh import Triangulation
from .operators import basis_change_matrix

logger = setup_logger(__name__)

COORDS_EDGES = "edges"
COORDS_BASIS = "basis"


@dataclass(frozen=True, eq=False)
class TwoForm:
    matrix: np.ndarray  # object array of ints / Fractions, antisymmetric
    coordinates: tuple[int, ...]  # edge index of each row
    kind: str = COORDS_EDGES

    @property
    def size(self) -> int:
        return len(self.coordinates)

    def is_antisymmetric(self) -> bool:
        return all(self.matrix[i, j] == -self.matrix[j, i] for i in range(self.size) for j in range(self.size))

    def support(self) -> set[int]:
        """Edges carrying a nonzero coefficient."""
        return {
            self.coordinates[i]
            for i in range(self.size)
            for j in range(self.size)
            if self.matrix[i, j] != 0
        }

    def __add__(self, other: "TwoForm") -> "TwoForm":
        if other.coordinates != self.coordinates or other.kind != self.kind:
            raise ValueError("cannot add 2-forms over different coordinates")
        return TwoForm(self.matrix + other.matrix, self.coordinates, self.kind)

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix], dtype=float).reshape(self.size, self.size)


def _zeros(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out[:, :] = 0
    return out


def psi_vertex(t: Triangulation, v: int, origin: int = 0, truncated: bool = False) -> TwoForm:
    """
    4π²ψ_v over all edges. `origin` rotates the labelling of the ring and
    `truncated` drops the last edge (k ≤ n − 1); both choices agree once
    restricted to the constraint surface.
    """
    ring = t.vertex_edges(v, origin)
    top = len(ring) - 1 if truncated else len(ring)
    b = _zeros(t.n_edges)
    for k in range(1, top):
        for l in range(k):
            # −dθ_k ∧ dθ_l = +dθ_l ∧ dθ_k
            b[ring[l], ring[k]] += 1
            b[ring[k], ring[l]] -= 1
    return TwoForm(b, tuple(range(t.n_edges)), COORDS_EDGES)


def total_form(t: Triangulation, truncated: bool = False) -> TwoForm:
    """B = Σ_v 4π²ψ_v over every vertex of the sphere."""
    total = psi_vertex(t, 0, truncated=truncated)
    for v in range(1, t.n_vertices):
        total = total + psi_vertex(t, v, truncated=truncated)
    return total


def restrict(form: TwoForm, basis: EdgeBasis, m0: Optional[np.ndarray] = None) -> TwoForm:
    """B₀ = M₀ᵀ B M₀ in the coordinates θ_𝓔₀."""
    if form.kind != COORDS_EDGES:
        raise ValueError("only full-edge forms can be restricted")
    m0 = basis_change_matrix(basis.triangulation, basis) if m0 is None else m0
    restricted = m0.T.dot(form.matrix).dot(m0)
    return TwoForm(restricted, tuple(basis.edges), COORDS_BASIS)


def _check_size(t: Triangulation, max_vertices: Optional[int]) -> int:
    limit = max_vertices if max_vertices is not None else get_numeric_settings().max_pfaffian_vertices
    n = t.n_vertices - 3
    if n > limit:
        raise TooLarge(f"exact Pfaffian is limited to N <= {limit}, got N = {n}", n=n, limit=limit)
    return n


def top_form_coefficient(
    t: Triangulation,
    basis: Optional[EdgeBasis] = None,
    max_vertices: Optional[int] = None,
) -> Fraction:
    """Pf(4π²B₀): the coefficient of Π_{𝓔₀} dθ_e in (Σ_v 4π²ψ_v)^N / N!."""
    _check_size(t, max_vertices)
    basis = basis if basis is not None else find_edge_basis(t)
    restricted = restrict(total_form(t), basis)
    if restricted.size % 2:
        raise OddDimension("restricted form has odd dimension", size=restricted.size)
    return pfaffian_exact(restricted.matrix.tolist())


def float_pfaffian(form: TwoForm) -> float:
    """Householder Pfaffian of the float matrix, an independent check on the exact value."""
    if form.size == 0:
        return 1.0
    if form.size % 2:
        raise OddDimension("Pfaffian of an odd-dimensional form", size=form.size)
    return float(np.real(householder_pfaffian(form.to_float(), method="H")))


def wedge_top_coefficient(form: TwoForm) -> Fraction:
    """
    ω^N / N! expanded directly in the exterior algebra, monomials keyed by
    bitmask. Independent of the elimination behind pfaffian_exact.
    """
    n = form.size
    if n % 2:
        raise OddDimension("top power of a 2-form on an odd-dimensional space", size=n)
    terms = [
        (i, j, Fraction(form.matrix[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if form.matrix[i, j] != 0
    ]
    power: dict[int, Fraction] = {0: Fraction(1)}
    for _ in range(n // 2):
        step: dict[int, Fraction] = {}
        for mask, coefficient in power.items():
            for i, j, b in terms:
                if mask >> i & 1 or mask >> j & 1:
                    continue
                # move dθ_i then dθ_j (i < j) past the larger indices already present
                swaps = bin(mask >> (i + 1)).count("1") + bin(mask >> (j + 1)).count("1")
                sign = -1 if swaps % 2 else 1
                key = mask | 1 << i | 1 << j
                step[key] = step.get(key, Fraction(0)) + sign * coefficient * b
        power = {k: c for k, c in step.items() if c != 0}
    return power.get((1 << n) - 1, Fraction(0)) / math.factorial(n // 2)


@dataclass(frozen=True)
class ChernReport:
    n_free: int
    pfaffian: Fraction
    oracle: Optional[Fraction]
    householder: Optional[float] = None

    @property
    def expected(self) -> int:
        return 2 ** (2 * self.n_free)

    @property
    def passed(self) -> bool:
        matches = abs(self.pfaffian) == self.expected
        if self.householder is not None and not math.isclose(self.householder, float(self.pfaffian), rel_tol=1e-9):
            return False
        return matches and (self.oracle is None or self.oracle == self.pfaffian)

    def to_dict(self) -> dict:
        return {
            "n_free": self.n_free,
            "pfaffian": str(self.pfaffian),
            "sign": 1 if self.pfaffian > 0 else -1,
            "expected_magnitude": self.expected,
            "wedge_oracle": None if self.oracle is None else str(self.oracle),
            "householder": self.householder,
            "passed": self.passed,
        }


def chern_check(
    t: Triangulation,
    basis: Optional[EdgeBasis] = None,
    with_oracle: bool = True,
    max_vertices: Optional[int] = None,
) -> ChernReport:
    """
    |Pf(4π²B₀)| against 2^{2N}. The exact value is cross-checked by a float
    Householder Pfaffian and, optionally, by the wedge expansion.
    """
    n = _check_size(t, max_vertices)
    basis = basis if basis is not None else find_edge_basis(t)
    restricted = restrict(total_form(t), basis)
    pf = pfaffian_exact(restricted.matrix.tolist())
    oracle = wedge_top_coefficient(restricted) if with_oracle else None
    report = ChernReport(n, pf, oracle, float_pfaffian(restricted))
    if report.passed:
        logger.info("Chern normalization holds: Pf = %s (N=%d)", pf, n)
    else:
        logger.warning("Chern normalization fails: Pf = %s, expected ±%d", pf, report.expected)
    return report
