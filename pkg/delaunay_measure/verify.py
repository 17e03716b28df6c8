"""
Identity suite
==============
Every identity that applies to one configuration, evaluated and collected
into a report of named residuals. Exact integer identities are checked
in rational arithmetic; the rest against their floating tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from common.settings import get_numeric_settings
from common.utils.logging_setup import setup_logger
from common.utils.timer import BlockTimer

from .chern import chern_check
from .combinatorics import find_edge_basis, random_edge_basis
from .fpgauge import pairing_total
from .hyperbolic import face_volume, face_volume_cross_ratio, hessian_fd_matrix
from .measure import (
    ROUTE_JACOBIAN,
    ROUTE_KAHLER,
    ROUTE_TREES,
    evaluate_routes,
    log_density_H,
    measure_jacobian,
)
from .mesh import PointConfig, Triangulation, delaunay_build, total_defect, validate_delaunay, vertex_angle_sum
from .operators import assemble_operators, kahler_face
from .report import IdentityCheck

logger = setup_logger(__name__)

REPORT_VERSION = 1

# exact rational checks and finite-difference Hessians get slow beyond these
EXACT_LIMIT = 12
HESSIAN_LIMIT = 4


@dataclass(frozen=True)
class VerifyReport:
    name: str
    n_free: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "name": self.name,
            "n_free": self.n_free,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }


def _geometry_checks(t: Triangulation) -> list[IdentityCheck]:
    out = []
    report = validate_delaunay(t)
    out.append(IdentityCheck("Delaunay empty circles", max(0.0, -report.min_margin), get_numeric_settings().tol_geom))
    out.append(IdentityCheck("total defect = 4π", abs(total_defect(t) - 4 * math.pi), 1e-9))
    flat = max(abs(vertex_angle_sum(t, v) - 2 * math.pi) for v in range(t.n_vertices))
    out.append(IdentityCheck("angle sum 2π at every vertex", flat, 1e-9))

    finite = [g for g in t.geometries if not g.is_infinite]
    volume_gap = max((abs(face_volume(g) - abs(face_volume_cross_ratio(g))) for g in finite), default=0.0)
    out.append(IdentityCheck("volume: Lobachevsky = Bloch-Wigner", volume_gap, 1e-11))
    return out


def _quadratic_checks(t: Triangulation, rng: np.random.Generator) -> list[IdentityCheck]:
    out = []
    worst = 0.0
    for g in t.geometries:
        if g.is_infinite:
            continue
        z2 = np.array(g.points) ** 2
        block = kahler_face(g)
        value = complex(z2 @ block @ z2.conj())
        # residual relative to the size of the terms that cancel
        magnitude = float(np.abs(z2) @ np.abs(block) @ np.abs(z2))
        worst = max(worst, abs(value - g.area) / magnitude)
    out.append(IdentityCheck("z² D(f) z̄² = Area(f)", worst, 1e-12))

    phi = rng.normal(size=t.n_vertices) + 1j * rng.normal(size=t.n_vertices)
    psi = rng.normal(size=t.n_vertices) + 1j * rng.normal(size=t.n_vertices)
    for v in range(t.n_vertices):
        if t.config.is_infinite(v):
            phi[v] = psi[v] = 0
    left, right = pairing_total(t, phi, psi)
    out.append(IdentityCheck("Φ·D·Ψ̄ = Σ Area/R² ∇̄Φ conj(∇̄Ψ)", abs(left - right) / (abs(left) + abs(right) or 1.0), 1e-11))
    return out


def _hessian_check(t: Triangulation, d: np.ndarray) -> IdentityCheck:
    free = list(t.config.free)
    fd = hessian_fd_matrix(t.config, free)
    exact = d[np.ix_(free, free)]
    allowed = np.maximum(1e-6, 1e-4 * np.abs(exact))
    return IdentityCheck("D = ∂∂̄𝒜 (finite differences)", float(np.max(np.abs(fd - exact) / allowed)), 1.0)


def _density_checks(t: Triangulation, d: np.ndarray) -> list[IdentityCheck]:
    config = t.config
    finite = list(config.finite_vertices)
    if config.infinity is not None or len(finite) < 4:
        return []
    triples = [tuple(config.fixed)] + [c for c in combinations(finite, 3) if set(c) != set(config.fixed)][:2]
    values = [log_density_H(d, config, triple).log_value for triple in triples]
    spread = max(abs(math.expm1(v - values[0])) for v in values)
    return [IdentityCheck("H independent of the fixed triple", spread, 1e-9)]


def run_identity_suite(
    config: PointConfig,
    seed: int = 0,
    with_hessian: Optional[bool] = None,
) -> VerifyReport:
    """Build, assemble and check everything that applies to `config`."""
    settings = get_numeric_settings()
    rng = np.random.default_rng(seed)
    n = config.n_free
    checks: list[IdentityCheck] = []

    with BlockTimer(f"identity suite ({config.name or 'config'}, N={n})"):
        t = delaunay_build(config)
        checks.extend(_geometry_checks(t))

        basis = find_edge_basis(t)
        checks.append(IdentityCheck("edge basis is an odd CRST complement", 0.0 if basis.check().ok else 1.0, 0.0, exact=True))
        ops = assemble_operators(t, basis)
        checks.extend(ops.checks(exact=n <= EXACT_LIMIT))
        checks.extend(_quadratic_checks(t, rng))

        if n >= 1:
            routes = evaluate_routes(ops)
            for a, b in combinations(routes.values, 2):
                checks.append(IdentityCheck(f"measure: {a.route} = {b.route}", a.relative_difference(b), settings.tol_agree))
            if any(v.route == ROUTE_TREES for v in routes.values):
                trees = routes.by_route(ROUTE_TREES)
                checks.append(IdentityCheck("3-tree sum is real", abs(trees.phase.imag), 1e-10))
            kahler = routes.by_route(ROUTE_KAHLER)
            checks.append(IdentityCheck("det D′ > 0", 0.0 if kahler.phase.real > 0 else 1.0, 0.0, exact=True))

            other = random_edge_basis(t, rng)
            jac = routes.by_route(ROUTE_JACOBIAN)
            checks.append(IdentityCheck(
                "Jacobian independent of the basis",
                measure_jacobian(assemble_operators(t, other)).relative_difference(jac),
                1e-10,
            ))
            checks.extend(_density_checks(t, ops.D))

        if with_hessian if with_hessian is not None else n <= HESSIAN_LIMIT:
            checks.append(_hessian_check(t, ops.D))

        if n <= settings.max_pfaffian_vertices and n >= 1:
            chern = chern_check(t, basis)
            checks.append(IdentityCheck(
                "|Pf(4π²B₀)| = 2^{2N}",
                float(abs(abs(chern.pfaffian) - chern.expected)),
                0.0,
                exact=True,
                detail=f"Pf = {chern.pfaffian}",
            ))

    report = VerifyReport(name=config.name, n_free=n, checks=checks)
    if report.ok:
        logger.info("All %d identities hold", len(checks))
    else:
        logger.warning("%d of %d identities failed: %s", len(report.failed), len(checks), [c.name for c in report.failed])
    return report
