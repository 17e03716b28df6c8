import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import spence

from delaunay_measure.errors import FlipInsideStencil, SingularArgument
from delaunay_measure.hyperbolic import (
    MAX_VOLUME,
    bloch_wigner,
    bloch_wigner_dilog,
    clausen,
    dilogarithm,
    face_volume,
    face_volume_cross_ratio,
    hessian_fd,
    lobachevsky,
    lobachevsky_derivative,
    local_prepotential,
    prepotential,
    reduce_angle,
)
from delaunay_measure.fixtures import OUTER_TRIANGLE
from delaunay_measure.mesh import PointConfig, delaunay_build, triangle_geometry


def _lobachevsky_quad(alpha: float) -> float:
    value, _ = quad(lambda t: -math.log(abs(2.0 * math.sin(t))), 0.0, alpha, limit=200, epsabs=1e-13, epsrel=1e-13)
    return value


@pytest.mark.parametrize("alpha", [0.05, 0.3, math.pi / 6, 1.0, math.pi / 3, 1.4, 2.0, 3.0])
def test_lobachevsky_against_quadrature(alpha):
    assert lobachevsky(alpha) == pytest.approx(_lobachevsky_quad(alpha), abs=1e-10)


def test_regular_ideal_tetrahedron():
    assert 3 * lobachevsky(math.pi / 3) == pytest.approx(1.0149416064, abs=1e-9)
    assert 3 * _lobachevsky_quad(math.pi / 3) == pytest.approx(MAX_VOLUME, abs=1e-9)


def test_lobachevsky_symmetries():
    alphas = np.linspace(-4.0, 4.0, 41)
    np.testing.assert_allclose(lobachevsky(-alphas), -lobachevsky(alphas), atol=1e-14)
    np.testing.assert_allclose(lobachevsky(alphas + math.pi), lobachevsky(alphas), atol=1e-13)
    assert lobachevsky(0.0) == 0.0
    assert lobachevsky(math.pi / 2) == pytest.approx(0.0, abs=1e-14)


def test_clausen_folding():
    assert clausen(math.pi) == 0.0
    assert clausen(-math.pi) == 0.0
    assert lobachevsky(math.pi / 2) == 0.0
    catalan = 0.915965594177219015
    assert clausen(math.pi / 2) == pytest.approx(catalan, abs=1e-14)
    # both sides of the fold meet
    below, above = clausen(np.nextafter(math.pi / 2, 0.0)), clausen(np.nextafter(math.pi / 2, 4.0))
    assert above == pytest.approx(below, abs=1e-14)


def test_lobachevsky_derivative_by_differences():
    h = 1e-6
    for alpha in (0.2, 0.9, 2.5):
        slope = (lobachevsky(alpha + h) - lobachevsky(alpha - h)) / (2 * h)
        assert slope == pytest.approx(lobachevsky_derivative(alpha), abs=1e-8)


def test_clausen_maximum():
    # Cl₂ peaks at π/3 with value 1.0149416064096536
    assert clausen(math.pi / 3) == pytest.approx(MAX_VOLUME, abs=1e-14)
    assert float(reduce_angle(3 * math.pi)) == pytest.approx(math.pi)


@pytest.mark.parametrize("seed", range(4))
def test_dilogarithm_against_spence(seed):
    rng = np.random.default_rng(seed)
    for _ in range(50):
        z = complex(rng.normal(scale=2.0), rng.normal(scale=2.0))
        assert dilogarithm(z) == pytest.approx(complex(spence(1 - z)), abs=1e-12)


def test_dilogarithm_special_values():
    assert dilogarithm(1) == pytest.approx(math.pi ** 2 / 6)
    assert dilogarithm(-1) == pytest.approx(-math.pi ** 2 / 12)
    assert dilogarithm(0.5) == pytest.approx(math.pi ** 2 / 12 - math.log(2) ** 2 / 2)


def test_bloch_wigner_two_routes_agree():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        z = complex(rng.normal(), rng.normal())
        assert bloch_wigner(z) == pytest.approx(bloch_wigner_dilog(z), abs=1e-11)


def test_bloch_wigner_symmetries():
    z = 0.3 + 0.8j
    d = bloch_wigner(z)
    assert bloch_wigner(1 - z) == pytest.approx(-d, abs=1e-14)
    assert bloch_wigner(1 / z) == pytest.approx(-d, abs=1e-14)
    assert bloch_wigner(z.conjugate()) == pytest.approx(-d, abs=1e-14)
    assert bloch_wigner(cmath.exp(1j * math.pi / 3)) == pytest.approx(MAX_VOLUME, abs=1e-14)


@pytest.mark.parametrize("z", [0, 1])
def test_bloch_wigner_singular_points(z):
    with pytest.raises(SingularArgument):
        bloch_wigner(z)


def test_face_volume_routes_agree_on_random_triangles():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        z1, z2, z3 = (complex(*rng.normal(size=2)) for _ in range(3))
        g = triangle_geometry(z1, z2, z3)
        assert face_volume(g) == pytest.approx(abs(face_volume_cross_ratio(g)), abs=1e-11)
        assert face_volume(g) <= MAX_VOLUME + 1e-12


def test_equilateral_face_has_maximal_volume():
    g = triangle_geometry(0, 1, cmath.exp(1j * math.pi / 3))
    assert face_volume(g) == pytest.approx(MAX_VOLUME)
    assert face_volume_cross_ratio(g) == pytest.approx(MAX_VOLUME)


def test_prepotential_signs(octa_mesh):
    pre = prepotential(octa_mesh)
    assert len(pre.volumes) == octa_mesh.n_faces
    # the clockwise exterior face enters with a plus sign
    assert pre.volumes[octa_mesh.fixed_face] < 0
    assert pre.fixed_face_term > 0
    assert pre.value == pytest.approx(-sum(pre.volumes))
    assert pre.variable_part == pytest.approx(pre.value - pre.fixed_face_term)
    assert local_prepotential(octa_mesh.config, octa_mesh.faces) == pytest.approx(pre.value)


def test_prepotential_ignores_infinite_faces(hexagon_mesh):
    pre = prepotential(hexagon_mesh)
    finite = [g for g in hexagon_mesh.geometries if not g.is_infinite]
    assert pre.value == pytest.approx(-len(finite) * MAX_VOLUME)


def test_hessian_fd_diagonal_is_real(tetra):
    value = hessian_fd(tetra, 3, 3)
    assert value.imag == 0.0
    assert value.real > 0


def test_hessian_fd_detects_flips():
    # four inner points close to one circle, turned off the outer triangle's mirror axes;
    # a step of 0.05 pushes vertex 3 across the circle
    inner = [0.3 * cmath.exp(1j * (math.pi / 4 + 0.2 + k * math.pi / 2)) for k in range(4)]
    inner[0] *= 1.03
    config = PointConfig.create(list(OUTER_TRIANGLE) + inner, fixed=(0, 1, 2))
    t = delaunay_build(config)
    with pytest.raises(FlipInsideStencil):
        hessian_fd(config, 3, 4, h=0.05, triangulation=t)
