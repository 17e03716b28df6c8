from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from delaunay_measure.errors import OddDimension, SingularMatrix
from delaunay_measure.exact import (
    as_exact_array,
    bareiss_determinant,
    integer_array,
    is_zero,
    permutation_parity,
    pfaffian_by_matchings,
    pfaffian_exact,
    rational_inverse,
)


def _random_skew(rng, n, low=-3, high=4):
    upper = np.triu(rng.integers(low, high, size=(n, n)), 1)
    return upper - upper.T


@pytest.mark.parametrize("seed", range(5))
def test_bareiss_matches_float_determinant(seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(-5, 6, size=(6, 6))
    exact = bareiss_determinant(m.tolist())
    assert isinstance(exact, int)
    assert exact == int(round(np.linalg.det(m)))


def test_bareiss_edge_cases():
    assert bareiss_determinant([]) == 1
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0
    assert bareiss_determinant([[Fraction(1, 2), 0], [0, Fraction(1, 3)]]) == Fraction(1, 6)
    with pytest.raises(ValueError):
        bareiss_determinant([[1, 2, 3], [4, 5, 6]])


def test_rational_inverse_is_exact():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inverse = rational_inverse(m)
    product = as_exact_array(m).dot(inverse)
    assert all(product[i, j] == (1 if i == j else 0) for i in range(3) for j in range(3))


def test_rational_inverse_rejects_singular():
    with pytest.raises(SingularMatrix):
        rational_inverse([[1, 2], [2, 4]])


def test_permutation_parity_against_inversions():
    for perm in permutations(range(5)):
        inversions = sum(1 for i in range(5) for j in range(i + 1, 5) if perm[i] > perm[j])
        assert permutation_parity(perm) == (-1) ** inversions


def test_pfaffian_small():
    assert pfaffian_exact([]) == 1
    assert pfaffian_exact([[0, 7], [-7, 0]]) == 7
    # Pf of the 4×4 form is a12 a34 − a13 a24 + a14 a23
    a = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]
    assert pfaffian_exact(a) == 1 * 6 - 2 * 5 + 3 * 4


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_against_matchings(seed, n):
    a = _random_skew(np.random.default_rng(seed), n)
    exact = pfaffian_exact(a.tolist())
    assert exact == pfaffian_by_matchings(a.tolist())
    assert exact ** 2 == bareiss_determinant(a.tolist())


def test_pfaffian_needs_pivoting():
    # a[0][1] = 0 forces a column swap in the elimination
    a = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    assert pfaffian_exact(a) == -1
    assert pfaffian_by_matchings(a) == -1


def test_pfaffian_of_singular_skew_matrix_is_zero():
    a = [[0, 1, 1, 1], [-1, 0, 1, 1], [-1, -1, 0, 0], [-1, -1, 0, 0]]
    assert pfaffian_exact(a) == 0


@pytest.mark.parametrize("fn", [pfaffian_exact, pfaffian_by_matchings])
def test_pfaffian_rejects_odd_dimension(fn):
    with pytest.raises(OddDimension):
        fn([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])


def test_integer_array_and_is_zero():
    converted = integer_array(np.array([[1, 0], [0, -2]], dtype=np.int64))
    assert converted.dtype == object
    assert type(converted[1, 1]) is int
    assert is_zero(np.zeros((2, 2), dtype=object))
    assert not is_zero(converted)
