import math

import numpy as np
import pytest

from common.settings import CONVENTION_FIXED_FACE, CONVENTION_INFINITY
from delaunay_measure.combinatorics import enumerate_3trees, find_edge_basis, random_edge_basis
from delaunay_measure.errors import CoincidingPoints
from delaunay_measure.fixtures import random_config
from delaunay_measure.measure import (
    ROUTE_FINITE_DIFFERENCE,
    ROUTE_JACOBIAN,
    ROUTE_KAHLER,
    ROUTE_TREES,
    MeasureValue,
    RouteReport,
    check_separation,
    cluster_links,
    collapse_config,
    collapsed_triangulations,
    density_H,
    evaluate_routes,
    log_density_H,
    measure_finite_difference,
    measure_jacobian,
    measure_kahler,
    measure_trees,
    mobius_log_weight,
    scaling_exponent,
    scan_cluster,
    tree_sum,
    vandermonde3,
)
from delaunay_measure.mesh import PointConfig, delaunay_build, mobius_apply, random_sl2
from delaunay_measure.operators import assemble_operators, kahler_assemble


def _ops(config):
    t = delaunay_build(config)
    return assemble_operators(t, find_edge_basis(t))


# ── Routes ───────────────────────────────────────────────────────────────────

def test_tetrahedron_routes(tetra):
    report = evaluate_routes(_ops(tetra), include_fd=True)
    assert {v.route for v in report.values} == {ROUTE_JACOBIAN, ROUTE_KAHLER, ROUTE_TREES, ROUTE_FINITE_DIFFERENCE}
    assert report.agree
    trees = report.by_route(ROUTE_TREES)
    assert abs(trees.phase.imag) < 1e-12
    assert report.by_route(ROUTE_KAHLER).phase == pytest.approx(1.0)


def test_no_free_vertices_gives_one():
    config = PointConfig.create([0, 1, 1j], fixed=(0, 1, 2))
    ops = _ops(config)
    assert measure_jacobian(ops).log_magnitude == 0.0
    assert measure_kahler(ops.D, config.fixed).value == 1.0


@pytest.mark.parametrize("convention", [CONVENTION_FIXED_FACE, CONVENTION_INFINITY])
@pytest.mark.parametrize("n_free", [1, 2, 3, 4])
@pytest.mark.parametrize("seed", range(2))
def test_three_routes_agree(convention, n_free, seed):
    config = random_config(n_free, np.random.default_rng(1000 * n_free + seed), convention)
    report = evaluate_routes(_ops(config))
    assert len(report.values) == 3
    assert report.max_disagreement < 1e-9
    for value in report.values:
        assert abs(value.phase.imag) < 1e-9


def test_three_routes_agree_at_five_free_points():
    report = evaluate_routes(_ops(random_config(5, np.random.default_rng(5))))
    assert len(report.values) == 3
    assert report.max_disagreement < 1e-9


@pytest.mark.parametrize("n_free", [8, 12, 20])
def test_jacobian_equals_kahler_for_larger_n(n_free):
    config = random_config(n_free, np.random.default_rng(n_free), min_separation=0.03)
    ops = _ops(config)
    jac = measure_jacobian(ops)
    kahler = measure_kahler(ops.D, config.fixed, config)
    assert jac.relative_difference(kahler) < 1e-9
    assert kahler.sign == 1


@pytest.mark.parametrize("name", ["tetra", "octa"])
def test_finite_difference_route(name, request):
    config = request.getfixturevalue(name)
    t = delaunay_build(config)
    basis = find_edge_basis(t)
    fd = measure_finite_difference(t, basis)
    jac = measure_jacobian(assemble_operators(t, basis))
    assert fd.relative_difference(jac) < 1e-6


def test_measure_does_not_depend_on_the_basis(octa, rng):
    t = delaunay_build(octa)
    reference = measure_jacobian(assemble_operators(t, find_edge_basis(t)))
    for _ in range(5):
        other = measure_jacobian(assemble_operators(t, random_edge_basis(t, rng)))
        assert other.relative_difference(reference) < 1e-10


def test_tree_sum_parity(octa_mesh):
    raw = tree_sum(octa_mesh, enumerate_3trees(octa_mesh))
    # N = 3: the raw sum is purely imaginary
    assert abs(raw.real) < 1e-10 * abs(raw)
    value = measure_trees(octa_mesh)
    assert value.n_free == 3
    assert value.magnitude == pytest.approx(abs(raw) / 8)


def test_coinciding_points_are_rejected():
    config = PointConfig.create([0, 1, 1j, 0.3 + 0.3j, 0.3 + 0.3j + 1e-12], fixed=(0, 1, 2))
    with pytest.raises(CoincidingPoints) as info:
        check_separation(config)
    assert info.value.details["vertices"] == (3, 4)


def test_route_report_agreement_rules():
    a = MeasureValue(1.0, 1 + 0j, ROUTE_JACOBIAN)
    b = MeasureValue(1.0 + 1e-11, 1 + 0j, ROUTE_KAHLER)
    fd = MeasureValue(1.0 + 1e-7, 1 + 0j, ROUTE_FINITE_DIFFERENCE)
    report = RouteReport(values=(a, b, fd), tolerance=1e-9)
    assert report.max_disagreement == pytest.approx(1e-11, rel=1e-3)
    assert report.fd_disagreement == pytest.approx(1e-7, rel=1e-3)
    assert report.agree
    assert not RouteReport(values=(a, b, fd), tolerance=1e-12).agree
    assert report.by_route(ROUTE_KAHLER) is b
    with pytest.raises(KeyError):
        report.by_route(ROUTE_TREES)


def test_measure_value_serialization():
    value = MeasureValue(math.log(8.0), -1 + 0j, ROUTE_TREES, n_free=3)
    assert value.value == pytest.approx(-8.0)
    assert value.sign == -1
    payload = value.to_dict()
    assert payload["magnitude"] == pytest.approx(8.0)
    assert payload["phase"] == [-1.0, 0.0]
    assert MeasureValue(800.0, 1 + 0j, ROUTE_KAHLER).to_dict()["magnitude"] is None


# ── Conformal density ────────────────────────────────────────────────────────

def test_H_is_independent_of_the_triple(octa):
    d = kahler_assemble(delaunay_build(octa))
    values = [log_density_H(d, octa, triple).log_value for triple in [(0, 1, 2), (3, 4, 5), (0, 3, 5), (1, 2, 4)]]
    assert max(values) - min(values) < 1e-9
    assert density_H(d, octa, 0, 1, 2) == pytest.approx(math.exp(values[0]))


@pytest.mark.parametrize("seed", range(3))
def test_H_is_independent_of_the_triple_on_random_configs(seed):
    config = random_config(4, np.random.default_rng(seed))
    d = kahler_assemble(delaunay_build(config))
    values = [log_density_H(d, config, t).log_value for t in [(0, 1, 2), (3, 5, 6), (1, 4, 6)]]
    assert max(values) - min(values) < 1e-9


def test_H_requires_distinct_finite_vertices(octa, hexagon):
    d = kahler_assemble(delaunay_build(octa))
    with pytest.raises(ValueError):
        log_density_H(d, octa, (0, 0, 1))
    with pytest.raises(ValueError):
        log_density_H(kahler_assemble(delaunay_build(hexagon)), hexagon, (7, 1, 2))


def test_vandermonde():
    assert vandermonde3(0, 1, 1j) == pytest.approx((0 - 1) * (1 - 1j) * (1j - 0))


@pytest.mark.parametrize("seed", range(5))
def test_H_is_mobius_covariant(seed):
    rng = np.random.default_rng(seed)
    config = random_config(3, rng)
    while True:
        a, b, c, d = random_sl2(rng)
        if min(abs(c * z + d) for z in config.finite_array) > 0.3:
            break
    image = mobius_apply(config, a, b, c, d)
    triple = (0, 1, 2)
    before = log_density_H(kahler_assemble(delaunay_build(config)), config, triple).log_value
    after = log_density_H(kahler_assemble(delaunay_build(image)), image, triple).log_value
    assert after == pytest.approx(before - mobius_log_weight(config, c, d), abs=1e-8)


def test_mobius_weight_of_a_translation(octa):
    assert mobius_log_weight(octa, 0, 1) == 0.0
    assert mobius_log_weight(octa, 0, 2) == pytest.approx(-4 * 6 * math.log(2))


# ── Collapse scaling ─────────────────────────────────────────────────────────

def test_collapse_config(octa):
    collapsed = collapse_config(octa, (3, 4), 0.5, center=0)
    assert collapsed.points[3] == pytest.approx(octa.points[3] / 2)
    assert collapsed.points[5] == octa.points[5]
    with pytest.raises(ValueError):
        collapse_config(octa, (0, 3), 0.5)
    with pytest.raises(ValueError):
        collapse_config(octa, (3,), 0.5)


def test_inner_triangle_collapse(octa):
    results = scan_cluster(octa, (3, 4, 5))
    assert results
    for r in results:
        assert r.combinatorial > 2
        assert abs(r.fitted - r.combinatorial) < 0.05
        assert r.links_first + r.links_second <= 2 * 3 - 3
    assert any(r.saturated for r in results)


def test_pair_collapse(octa):
    results = scan_cluster(octa, (3, 4))
    assert {r.combinatorial for r in results} <= {3, 4}
    assert all(abs(r.fitted - r.combinatorial) < 0.05 for r in results)


def test_cluster_links(tetra_mesh):
    tree = enumerate_3trees(tetra_mesh)[0]
    assert cluster_links(tree, (3,)) == (0, 0)


@pytest.mark.slow
@pytest.mark.parametrize("convention", [CONVENTION_FIXED_FACE, CONVENTION_INFINITY])
@pytest.mark.parametrize("n_free", [1, 2, 3, 4, 5])
def test_route_sweep(convention, n_free):
    rng = np.random.default_rng(50 + n_free)
    for _ in range(50):
        config = random_config(n_free, rng, convention)
        report = evaluate_routes(_ops(config))
        assert report.agree, report.to_dict()


@pytest.mark.slow
def test_jacobian_equals_kahler_up_to_fifty_points():
    rng = np.random.default_rng(51)
    for n_free in range(1, 51):
        config = random_config(n_free, rng, min_separation=0.02)
        ops = _ops(config)
        assert measure_jacobian(ops).relative_difference(measure_kahler(ops.D, config.fixed)) < 1e-9


def test_scaling_exponent_of_one_tree(octa, tetra_mesh):
    built = collapsed_triangulations(octa, (3, 4, 5))
    tree = enumerate_3trees(built[0], built[0].fixed_face)[0]
    result = scaling_exponent(octa, (3, 4, 5), tree, triangulations=built)
    assert result.cluster == (3, 4, 5)
    assert result.combinatorial == 6 - result.links_first - result.links_second
    assert result.to_dict()["saturated"] == result.saturated
    with pytest.raises(ValueError):
        scaling_exponent(octa, (3, 4, 5), enumerate_3trees(tetra_mesh)[0], triangulations=built)
