"""
Exact linear algebra
====================
Integer and rational routines behind the identities that hold exactly
(R·E = 0, det E₀ = 1, E = M₀E₀M₀ᵀ, det R = ±2, Pfaffians of Chern forms).

Matrices are plain nested sequences or numpy object arrays holding Python
ints / Fractions; nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import OddDimension, SingularMatrix

Scalar = Union[int, Fraction]


def as_exact_array(matrix: Iterable[Iterable[Scalar]]) -> np.ndarray:
    """Object array of Fractions (ints are promoted)."""
    rows = [[Fraction(value) for value in row] for row in matrix]
    if not rows:
        return np.empty((0, 0), dtype=object)
    return np.array(rows, dtype=object).reshape(len(rows), len(rows[0]))


def integer_array(matrix: np.ndarray) -> np.ndarray:
    """Object array of Python ints from an integer-valued numpy array."""
    out = np.empty(matrix.shape, dtype=object)
    for index, value in np.ndenumerate(matrix):
        out[index] = int(value)
    return out


def is_zero(matrix: np.ndarray) -> bool:
    return all(value == 0 for value in np.asarray(matrix, dtype=object).flat)


def bareiss_determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """
    Fraction-free Gaussian elimination. Integer input gives an exact int;
    rational input is accepted as well (divisions stay exact).
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")

    sign = 1
    previous: Scalar = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = pivot * m[i][j] - m[i][k] * m[k][j]
                if isinstance(value, int) and isinstance(previous, int):
                    # exact by Sylvester's identity
                    m[i][j] = value // previous
                else:
                    m[i][j] = Fraction(value) / previous
            m[i][k] = 0
        previous = pivot
    result = sign * m[n - 1][n - 1]
    if isinstance(result, Fraction) and result.denominator == 1:
        return int(result)
    return result


def rational_inverse(matrix: Sequence[Sequence[Scalar]]) -> np.ndarray:
    """Gauss–Jordan inverse over the rationals."""
    n = len(matrix)
    work = [[Fraction(value) for value in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(matrix)]

    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrix("matrix is singular over the rationals", size=n)
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [value / pivot for value in work[col]]
        for r in range(n):
            factor = work[r][col]
            if r == col or factor == 0:
                continue
            work[r] = [a - factor * b for a, b in zip(work[r], work[col])]

    return as_exact_array(row[n:] for row in work)


def permutation_parity(perm: Sequence[int]) -> int:
    """+1 for even permutations of range(len(perm)), −1 for odd ones."""
    seen = [False] * len(perm)
    parity = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = perm[node]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def pfaffian_exact(matrix: Sequence[Sequence[Scalar]]) -> Fraction:
    """
    Pfaffian by skew-symmetric elimination (Parlett–Reid) in rationals.
    Each step pivots row k onto column k+1 and clears the rest of row k
    with congruence moves, which leave the Pfaffian unchanged.
    """
    a = [[Fraction(value) for value in row] for row in matrix]
    n = len(a)
    if n % 2:
        raise OddDimension("Pfaffian of an odd-dimensional matrix", size=n)

    result = Fraction(1)
    for k in range(0, n - 1, 2):
        pivot = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k + 1:
            _swap_symmetric(a, k + 1, pivot)
            result = -result
        head = a[k][k + 1]
        result *= head
        for i in range(k + 2, n):
            tau = a[k][i] / head
            if tau == 0:
                continue
            for r in range(n):
                a[r][i] -= tau * a[r][k + 1]
            for c in range(n):
                a[i][c] -= tau * a[k + 1][c]
    return result


def pfaffian_by_matchings(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """
    Expansion along the first row, i.e. the signed sum over perfect
    matchings. Exponential; only for small oracle checks.
    """
    n = len(matrix)
    if n % 2:
        raise OddDimension("Pfaffian of an odd-dimensional matrix", size=n)
    return _matching_sum(matrix, tuple(range(n)))


def _matching_sum(matrix, indices: tuple[int, ...]) -> Scalar:
    if not indices:
        return 1
    first = indices[0]
    total: Scalar = 0
    for position in range(1, len(indices)):
        partner = indices[position]
        entry = matrix[first][partner]
        if entry == 0:
            continue
        rest = indices[1:position] + indices[position + 1:]
        sign = 1 if position % 2 == 1 else -1
        total += sign * entry * _matching_sum(matrix, rest)
    return total


def _swap_symmetric(a: list[list[Fraction]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]
