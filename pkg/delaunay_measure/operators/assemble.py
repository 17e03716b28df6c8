"""
Operator set of a triangulation
===============================
Integer incidence data (R, E), the complex edge–vertex matrices A and Ā,
the exact basis change M₀ with E₀ = P₀ᵀEP₀, the Jacobian J = (i/2)A·E of
the angles with respect to z and the Kähler matrix D = (1/4i)A·E·A†.

Global orders are fixed: vertices by index, edges by (min, max) endpoint.
Rows and columns of A touching the vertex at infinity are zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger

from ..combinatorics import EdgeBasis, complement_determinant, edge_edge_matrix, incidence_matrix
from ..exact import bareiss_determinant, integer_array, rational_inverse
from ..mesh import Triangulation
from ..report import IdentityCheck
from .kahler import kahler_assemble, min_eigenvalue_ratio, zero_modes

logger = setup_logger(__name__)


def edge_vertex_matrix(t: Triangulation) -> np.ndarray:
    """A[v, e] = 1/(z_v − z_v′) for e = (v, v′); zero when either end is at infinity."""
    a = np.zeros((t.n_vertices, t.n_edges), dtype=complex)
    config = t.config
    for e, (u, v) in enumerate(t.edges):
        if config.is_infinite(u) or config.is_infinite(v):
            continue
        diff = config.points[u] - config.points[v]
        a[u, e] = 1.0 / diff
        a[v, e] = -1.0 / diff
    return a


def basis_change_matrix(t: Triangulation, basis: EdgeBasis, r: np.ndarray | None = None) -> np.ndarray:
    """
    M₀ in global edge order: identity rows on 𝓔₀ and −R̃₀⁻¹R₀ on the
    complement, so that dθ_e = Σ_{e′∈𝓔₀} (M₀)_{e,e′} dθ_{e′}.
    """
    r = incidence_matrix(t) if r is None else r
    r_basis = [[int(r[v, e]) for e in basis.edges] for v in range(t.n_vertices)]
    r_tilde = [[int(r[v, e]) for e in basis.complement] for v in range(t.n_vertices)]
    inverse = rational_inverse(r_tilde)
    solved = inverse.dot(np.array(r_basis, dtype=object)) if basis.edges else np.empty((t.n_vertices, 0), dtype=object)

    m0 = np.empty((t.n_edges, len(basis.edges)), dtype=object)
    m0[:, :] = Fraction(0)
    for column, e in enumerate(basis.edges):
        m0[e, column] = Fraction(1)
    for row, e in enumerate(basis.complement):
        for column in range(len(basis.edges)):
            m0[e, column] = -Fraction(solved[row, column])
    return m0


@dataclass(frozen=True, eq=False)
class OperatorSet:
    triangulation: Triangulation = field(repr=False)
    basis: EdgeBasis = field(repr=False)
    R: np.ndarray
    E: np.ndarray
    A: np.ndarray

    @property
    def A_bar(self) -> np.ndarray:
        return self.A.conj()

    @cached_property
    def P0(self) -> np.ndarray:
        return self.basis.projector()

    @cached_property
    def M0(self) -> np.ndarray:
        return basis_change_matrix(self.triangulation, self.basis, self.R)

    @cached_property
    def E0(self) -> np.ndarray:
        return self.E[np.ix_(self.basis.edges, self.basis.edges)]

    @cached_property
    def J(self) -> np.ndarray:
        """∂θ_e/∂z_v."""
        return 0.5j * self.A @ self.E

    @cached_property
    def J_bar(self) -> np.ndarray:
        """∂θ_e/∂z̄_v."""
        return -0.5j * self.A_bar @ self.E

    @cached_property
    def D(self) -> np.ndarray:
        return (self.A @ self.E @ self.A.conj().T) / 4j

    @cached_property
    def D_faces(self) -> np.ndarray:
        return kahler_assemble(self.triangulation)

    # ── Identities ───────────────────────────────────────────────────────

    def checks(self, exact: bool = True) -> list[IdentityCheck]:
        """Residuals of every identity the operators satisfy."""
        settings = get_numeric_settings()
        out: list[IdentityCheck] = []
        e_exact = integer_array(self.E)

        out.append(IdentityCheck("E antisymmetric", float(np.abs(self.E + self.E.T).max(initial=0)), 0.0, exact=True))
        re = integer_array(self.R).dot(e_exact)
        out.append(IdentityCheck("R·E = 0", float(max((abs(x) for x in re.flat), default=0)), 0.0, exact=True))

        if exact:
            det_e0 = bareiss_determinant(integer_array(self.E0).tolist())
            out.append(IdentityCheck("det E0 = 1", float(abs(det_e0 - 1)), 0.0, exact=True))

            det_r = complement_determinant(self.triangulation, self.basis.complement)
            out.append(IdentityCheck("det R over complement = ±2", float(abs(abs(det_r) - 2)), 0.0, exact=True))

            m0 = self.M0
            rebuilt = m0.dot(integer_array(self.E0)).dot(m0.T)
            diff = max((abs(a - b) for a, b in zip(rebuilt.flat, e_exact.flat)), default=Fraction(0))
            out.append(IdentityCheck("E = M0 E0 M0^T", float(diff), 0.0, exact=True))

        a_scale = float(np.abs(self.A).max(initial=0.0)) ** 2 or 1.0
        aea = self.A @ self.E @ self.A.T
        out.append(IdentityCheck("A·E·A^T = 0", float(np.abs(aea).max(initial=0.0)) / a_scale, 1e-12))

        d, d_faces = self.D, self.D_faces
        d_scale = float(np.abs(d).max(initial=0.0)) or 1.0
        out.append(IdentityCheck("D Hermitian", float(np.abs(d - d.conj().T).max(initial=0.0)) / d_scale, 1e-12))
        out.append(IdentityCheck(
            "D face sum = (1/4i) A E A^dagger",
            float(np.abs(d - d_faces).max(initial=0.0)) / d_scale,
            1e-11,
        ))
        out.append(IdentityCheck("D positive semidefinite", max(0.0, -min_eigenvalue_ratio(d)), 1e-10))

        for k, mode in enumerate(zero_modes(self.triangulation), start=1):
            left = float(np.abs(mode @ d).max(initial=0.0))
            right = float(np.abs(d @ mode.conj()).max(initial=0.0))
            norm = float(np.linalg.norm(mode)) or 1.0
            out.append(IdentityCheck(f"zero mode {k}", max(left, right) / (d_scale * norm), 1e-10))

        failed = [c.name for c in out if not c.passed]
        if failed:
            logger.warning("Operator identities failed: %s", ", ".join(failed))
        else:
            logger.debug("All %d operator identities hold (agree tolerance %.1e)", len(out), settings.tol_agree)
        return out


def assemble_operators(t: Triangulation, basis: EdgeBasis) -> OperatorSet:
    if basis.triangulation is not t and not basis.triangulation.same_combinatorics(t):
        raise ValueError("edge basis belongs to a different triangulation")
    ops = OperatorSet(
        triangulation=t,
        basis=basis,
        R=incidence_matrix(t),
        E=edge_edge_matrix(t),
        A=edge_vertex_matrix(t),
    )
    logger.debug("Assembled operators: V=%d E=%d basis=%d", t.n_vertices, t.n_edges, basis.size)
    return ops


def jacobian(ops: OperatorSet) -> tuple[np.ndarray, np.ndarray]:
    """(J, J̄) = ((i/2)A·E, (−i/2)Ā·E), vertices × edges."""
    return ops.J, ops.J_bar
