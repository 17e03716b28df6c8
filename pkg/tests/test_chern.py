from fractions import Fraction

import numpy as np
import pytest

from delaunay_measure.chern import (
    COORDS_BASIS,
    ChernReport,
    TwoForm,
    chern_check,
    float_pfaffian,
    psi_vertex,
    restrict,
    top_form_coefficient,
    total_form,
    wedge_top_coefficient,
)
from delaunay_measure.combinatorics import find_edge_basis, random_edge_basis
from delaunay_measure.errors import OddDimension, TooLarge
from delaunay_measure.exact import bareiss_determinant
from delaunay_measure.fixtures import random_config
from delaunay_measure.mesh import delaunay_build


@pytest.mark.parametrize("name, magnitude", [("tetra_mesh", 4), ("octa_mesh", 64), ("hexagon_mesh", 4 ** 5)])
def test_top_form_normalization(name, magnitude, request):
    t = request.getfixturevalue(name)
    pf = top_form_coefficient(t)
    assert isinstance(pf, Fraction)
    assert abs(pf) == magnitude


@pytest.mark.parametrize("seed", range(3))
def test_random_two_point_configs(seed):
    t = delaunay_build(random_config(2, np.random.default_rng(seed)))
    report = chern_check(t)
    assert report.passed
    assert abs(report.pfaffian) == 16
    assert report.oracle == report.pfaffian


def test_normalization_in_any_basis(octa_mesh, rng):
    for _ in range(3):
        assert abs(top_form_coefficient(octa_mesh, random_edge_basis(octa_mesh, rng))) == 64


def test_pfaffian_squares_to_the_determinant(octa_mesh):
    restricted = restrict(total_form(octa_mesh), find_edge_basis(octa_mesh))
    pf = top_form_coefficient(octa_mesh)
    assert bareiss_determinant(restricted.matrix.tolist()) == pf * pf


def test_forms_are_antisymmetric(octa_mesh):
    assert total_form(octa_mesh).is_antisymmetric()
    assert psi_vertex(octa_mesh, 4).is_antisymmetric()
    restricted = restrict(total_form(octa_mesh), find_edge_basis(octa_mesh))
    assert restricted.kind == COORDS_BASIS
    assert restricted.size == 6
    assert restricted.is_antisymmetric()


def test_vertex_form_lives_on_its_star(octa_mesh):
    star = set(octa_mesh.vertex_edges(3))
    assert psi_vertex(octa_mesh, 3).support() <= star


@pytest.mark.parametrize("v", range(6))
def test_ring_origin_and_truncation_agree_on_the_basis(octa_mesh, v):
    basis = find_edge_basis(octa_mesh)
    reference = restrict(psi_vertex(octa_mesh, v), basis).matrix
    degree = len(octa_mesh.vertex_edges(v))
    for origin in range(1, degree):
        assert np.array_equal(restrict(psi_vertex(octa_mesh, v, origin), basis).matrix, reference)
    assert np.array_equal(restrict(psi_vertex(octa_mesh, v, truncated=True), basis).matrix, reference)


def test_wedge_expansion_of_a_known_form():
    b = np.empty((4, 4), dtype=object)
    b[:, :] = 0
    entries = {(0, 1): 2, (0, 2): 3, (0, 3): 5, (1, 2): 7, (1, 3): 11, (2, 3): 13}
    for (i, j), value in entries.items():
        b[i, j], b[j, i] = value, -value
    form = TwoForm(b, (0, 1, 2, 3))
    # Pf = b01 b23 − b02 b13 + b03 b12
    assert wedge_top_coefficient(form) == 2 * 13 - 3 * 11 + 5 * 7


def test_odd_dimension_is_rejected():
    b = np.empty((3, 3), dtype=object)
    b[:, :] = 0
    with pytest.raises(OddDimension):
        wedge_top_coefficient(TwoForm(b, (0, 1, 2)))


def test_forms_over_different_coordinates_do_not_add(octa_mesh):
    restricted = restrict(total_form(octa_mesh), find_edge_basis(octa_mesh))
    with pytest.raises(ValueError):
        total_form(octa_mesh) + restricted
    with pytest.raises(ValueError):
        restrict(restricted, find_edge_basis(octa_mesh))


def test_size_guard(octa_mesh):
    with pytest.raises(TooLarge):
        top_form_coefficient(octa_mesh, max_vertices=2)
    with pytest.raises(TooLarge):
        chern_check(octa_mesh, max_vertices=2)


def test_report_serialization(tetra_mesh):
    report = chern_check(tetra_mesh)
    payload = report.to_dict()
    assert payload["expected_magnitude"] == 4
    assert payload["passed"] is True
    assert payload["pfaffian"] in ("4", "-4")
    assert payload["wedge_oracle"] == payload["pfaffian"]
    assert abs(payload["householder"]) == pytest.approx(4.0)
    assert chern_check(tetra_mesh, with_oracle=False).oracle is None


@pytest.mark.parametrize("name", ["tetra_mesh", "octa_mesh", "hexagon_mesh"])
def test_householder_pfaffian_agrees_with_exact(name, request):
    t = request.getfixturevalue(name)
    restricted = restrict(total_form(t), find_edge_basis(t))
    exact = top_form_coefficient(t)
    assert float_pfaffian(restricted) == pytest.approx(float(exact), rel=1e-9)
    assert restricted.to_float().shape == (restricted.size, restricted.size)


def test_float_pfaffian_edge_cases():
    assert float_pfaffian(TwoForm(np.empty((0, 0), dtype=object), ())) == 1.0
    b = np.array([[0, 2], [-2, 0]], dtype=object)
    assert float_pfaffian(TwoForm(b, (0, 1))) == pytest.approx(2.0)
    with pytest.raises(OddDimension):
        float_pfaffian(TwoForm(np.zeros((3, 3), dtype=object), (0, 1, 2)))


def test_report_fails_when_float_check_disagrees():
    assert ChernReport(1, Fraction(4), None, 4.0).passed
    assert not ChernReport(1, Fraction(4), None, 3.5).passed
    assert not ChernReport(1, Fraction(2), None, 2.0).passed
