import cmath
import math

import numpy as np
import pytest

from common.settings import CONVENTION_INFINITY
from delaunay_measure.combinatorics import find_edge_basis, incidence_matrix
from delaunay_measure.exact import integer_array
from delaunay_measure.fixtures import HEXAGON_CIRCUMRADIUS, OUTER_TRIANGLE, random_config
from delaunay_measure.hyperbolic import hessian_fd_matrix
from delaunay_measure.measure import angle_jacobian_fd
from delaunay_measure.mesh import PointConfig, delaunay_build, triangle_geometry
from delaunay_measure.operators import (
    assemble_operators,
    basis_change_matrix,
    cotangent_laplacian,
    jacobian,
    kahler_assemble,
    kahler_face,
    kahler_face_spectrum,
    min_eigenvalue_ratio,
    positive_eigenvalue,
    zero_modes,
)


def _ops(t):
    return assemble_operators(t, find_edge_basis(t))


@pytest.mark.parametrize("name", ["tetra_mesh", "octa_mesh", "hexagon_mesh"])
def test_fixture_identities(name, request):
    ops = _ops(request.getfixturevalue(name))
    failed = [c.name for c in ops.checks() if not c.passed]
    assert not failed


@pytest.mark.parametrize("convention", ["fixed-face", CONVENTION_INFINITY])
@pytest.mark.parametrize("seed", range(5))
def test_random_identities(convention, seed):
    t = delaunay_build(random_config(6, np.random.default_rng(seed), convention))
    checks = _ops(t).checks()
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert {c.name for c in checks} >= {"R·E = 0", "det E0 = 1", "E = M0 E0 M0^T", "A·E·A^T = 0"}


def test_basis_change_matrix(octa_mesh):
    basis = find_edge_basis(octa_mesh)
    m0 = basis_change_matrix(octa_mesh, basis)
    assert m0.shape == (12, 6)
    for column, e in enumerate(basis.edges):
        assert all(m0[e, k] == (1 if k == column else 0) for k in range(6))
    product = integer_array(incidence_matrix(octa_mesh)).dot(m0)
    assert all(x == 0 for x in product.flat)


def test_assemble_rejects_foreign_basis(tetra_mesh, octa_mesh):
    with pytest.raises(ValueError):
        assemble_operators(tetra_mesh, find_edge_basis(octa_mesh))


def test_jacobian_matches_finite_differences(octa_mesh):
    ops = _ops(octa_mesh)
    free = list(octa_mesh.config.free)
    cols = list(ops.basis.edges)
    fd = angle_jacobian_fd(octa_mesh, ops.basis)
    n = len(free)
    # ∂/∂z = (∂/∂x − i ∂/∂y) / 2
    expected = 0.5 * (fd[:n] - 1j * fd[n:])
    np.testing.assert_allclose(ops.J[np.ix_(free, cols)], expected, atol=1e-7)
    np.testing.assert_allclose(ops.J_bar[np.ix_(free, cols)], expected.conj(), atol=1e-7)


@pytest.mark.parametrize("seed", range(4))
def test_kahler_is_hessian_of_prepotential(seed):
    config = random_config(int(np.random.default_rng(seed).integers(1, 5)), np.random.default_rng(seed + 100))
    t = delaunay_build(config)
    d = _ops(t).D
    free = list(config.free)
    fd = hessian_fd_matrix(config, free)
    exact = d[np.ix_(free, free)]
    assert np.all(np.abs(fd - exact) <= np.maximum(1e-6, 1e-4 * np.abs(exact)))


def test_face_sum_matches_operator_form(octa_mesh):
    ops = _ops(octa_mesh)
    np.testing.assert_allclose(ops.D, ops.D_faces, atol=1e-12)
    np.testing.assert_allclose(ops.D, ops.D.conj().T, atol=1e-12)


def test_zero_modes(octa_mesh, hexagon_mesh):
    for t in (octa_mesh, hexagon_mesh):
        d = kahler_assemble(t)
        scale = np.abs(d).max()
        for mode in zero_modes(t):
            assert np.abs(mode @ d).max() < 1e-10 * scale * np.linalg.norm(mode)


def test_face_block_spectrum():
    g = triangle_geometry(0.1 + 0.2j, 1.3 - 0.1j, 0.4 + 0.9j)
    block = kahler_face(g)
    spectrum = kahler_face_spectrum(g)
    np.testing.assert_allclose(spectrum[:2], 0.0, atol=1e-12)
    assert spectrum[2] == pytest.approx(positive_eigenvalue(g))
    np.testing.assert_allclose(block, block.conj().T, atol=1e-15)


def test_clockwise_block_flips_sign():
    z1, z2, z3 = 0.1 + 0.2j, 1.3 - 0.1j, 0.4 + 0.9j
    ccw = kahler_face(triangle_geometry(z1, z2, z3))
    cw = kahler_face(triangle_geometry(z1, z3, z2))
    order = [0, 2, 1]
    np.testing.assert_allclose(cw, -ccw[np.ix_(order, order)], atol=1e-15)


@pytest.mark.parametrize("points", [(0.1 + 0.2j, 1.3 - 0.1j, 0.4 + 0.9j), (0.0, 0.5j, 1.0)])
def test_quadratic_identity_per_face(points):
    g = triangle_geometry(*points)
    z2 = np.array(points) ** 2
    value = z2 @ kahler_face(g) @ z2.conj()
    assert value == pytest.approx(g.area, abs=1e-12)


def test_isoradial_patch_is_the_cotangent_laplacian(hexagon_mesh):
    d = kahler_assemble(hexagon_mesh)
    lap = cotangent_laplacian(hexagon_mesh)
    expected = -lap[0] / (4 * HEXAGON_CIRCUMRADIUS ** 2)
    np.testing.assert_allclose(d[0], expected, atol=1e-12)
    assert d[0, 0].real == pytest.approx(3 * math.sqrt(3) / 2)


def test_cotangent_laplacian_rows_sum_to_zero(octa_mesh):
    lap = cotangent_laplacian(octa_mesh)
    np.testing.assert_allclose(lap.sum(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(lap, lap.T)


def test_min_eigenvalue_ratio():
    assert min_eigenvalue_ratio(np.zeros((3, 3))) == 0.0
    assert min_eigenvalue_ratio(np.diag([1.0, 3.0])) == pytest.approx(0.25)
    assert min_eigenvalue_ratio(np.diag([-1.0, 3.0])) < 0


def _square_patch(push: float) -> PointConfig:
    # turned off the outer triangle's mirror axes, so (3, 4, 5, 6) is the only near-cocircular quadruple
    inner = [0.3 * cmath.exp(1j * (math.pi / 4 + 0.2 + k * math.pi / 2)) for k in range(4)]
    inner[0] *= 1.0 + push
    return PointConfig.create(list(OUTER_TRIANGLE) + inner, fixed=(0, 1, 2))


def test_kahler_matrix_is_continuous_across_a_flip():
    before = delaunay_build(_square_patch(-1e-9))
    after = delaunay_build(_square_patch(1e-9))
    assert not before.same_combinatorics(after)

    d_before, d_after = kahler_assemble(before), kahler_assemble(after)
    np.testing.assert_allclose(d_before, d_after, atol=1e-8)
    for t, d in ((before, d_before), (after, d_after)):
        diagonal = next(e for e in ((3, 5), (4, 6)) if t.has_edge(*e))
        assert abs(d[diagonal]) < 1e-8
        assert t.thetas[t.edge_id(*diagonal)] < 1e-8


def test_jacobian_pair(octa_mesh):
    ops = assemble_operators(octa_mesh, find_edge_basis(octa_mesh))
    j, j_bar = jacobian(ops)
    assert j.shape == (octa_mesh.n_vertices, octa_mesh.n_edges)
    np.testing.assert_allclose(j_bar, j.conj(), atol=1e-15)
