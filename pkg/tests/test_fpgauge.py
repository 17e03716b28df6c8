import math

import numpy as np
import pytest

from delaunay_measure.fpgauge import (
    fp_pairing,
    gradient_ops,
    liouville_field,
    pairing_total,
    vertex_function,
)
from delaunay_measure.mesh import triangle_geometry


def test_gradients_of_z_and_zbar():
    g = triangle_geometry(0, 1, 1j)
    z = np.array([0, 1, 1j])
    assert gradient_ops(g, z) == pytest.approx((1, 0))
    assert gradient_ops(g, z.conj()) == pytest.approx((0, 1))
    assert gradient_ops(g, np.ones(3, dtype=complex)) == pytest.approx((0, 0))


def test_gradient_rejects_infinite_faces(hexagon_mesh):
    g = next(g for g in hexagon_mesh.geometries if g.is_infinite)
    with pytest.raises(ValueError):
        gradient_ops(g, np.zeros(hexagon_mesh.n_vertices, dtype=complex))


@pytest.mark.parametrize("corners", [(0, 1, 1j), (0.2 + 0.1j, -0.3j, 0.7 + 0.4j), (0, 1j, 1)])
def test_face_pairing(corners, rng):
    g = triangle_geometry(*corners)
    phi = rng.normal(size=3) + 1j * rng.normal(size=3)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    left, right = fp_pairing(g, phi, psi)
    assert left == pytest.approx(right, rel=1e-12, abs=1e-14)


def test_z_squared_gives_the_area():
    g = triangle_geometry(0, 1, 1j)
    z2 = np.array([0, 1, -1], dtype=complex)
    left, right = fp_pairing(g, z2, z2)
    assert left == pytest.approx(g.area)
    assert right == pytest.approx(g.area)


@pytest.mark.parametrize("name", ["tetra_mesh", "octa_mesh", "hexagon_mesh"])
def test_pairing_total(name, rng, request):
    t = request.getfixturevalue(name)
    phi = vertex_function(t, lambda z: complex(rng.normal(), rng.normal()))
    psi = vertex_function(t, lambda z: complex(rng.normal(), rng.normal()))
    left, right = pairing_total(t, phi, psi)
    assert abs(left - right) < 1e-11 * (abs(left) + abs(right))


def test_quadratic_function_is_a_zero_mode(octa_mesh):
    phi = vertex_function(octa_mesh, lambda z: z * z)
    left, right = pairing_total(octa_mesh, phi, phi)
    # signed face areas of a closed sphere cancel
    assert abs(left) < 1e-12
    assert abs(right) < 1e-12


def test_vertex_function_vanishes_at_infinity(hexagon_mesh):
    values = vertex_function(hexagon_mesh, lambda z: z + 1)
    assert values[7] == 0
    assert values[0] == 1


def test_liouville_field_on_the_hexagon(hexagon_mesh):
    field = liouville_field(hexagon_mesh)
    assert len(field.faces) == 6
    assert np.allclose(field.phi, math.log(3.0))
    assert np.allclose(field.conformal_factor, 3.0)
    assert np.allclose(field.area_element, math.sqrt(3.0) / 4)
    payload = field.to_dict()
    assert len(payload["centers"]) == 6


def test_liouville_field_on_chosen_faces(octa_mesh):
    clockwise = [f for f, g in enumerate(octa_mesh.geometries) if not g.is_counterclockwise]
    field = liouville_field(octa_mesh, clockwise)
    assert field.faces == tuple(clockwise)
    assert field.area_element[0] < 0
