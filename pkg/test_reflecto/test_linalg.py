import random
from fractions import Fraction

import pytest

from conftest import from_sympy, to_sympy
from reflecto.errors import DimensionError, SingularMatrixError
from reflecto.linalg import (
    is_identity,
    mat_det,
    mat_inv,
    principal_submatrix,
    schur_complement,
    try_inv,
)
from reflecto.rational import RatMatrix


def _random_matrix(rng: random.Random, n: int) -> RatMatrix:
    return RatMatrix.from_function(n, n, lambda i, j: Fraction(rng.randint(-6, 6), rng.randint(1, 5)))


def test_det_examples():
    assert mat_det(RatMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert mat_det(RatMatrix.from_rows([["1/2", 0], [0, "2/3"]])) == Fraction(1, 3)
    assert mat_det(RatMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert mat_det(RatMatrix.from_rows([[1, 2], [2, 4]])) == 0


def test_inverse_examples():
    assert mat_inv(RatMatrix.from_rows([[2, 0], [0, 4]])) == RatMatrix.from_rows([["1/2", 0], [0, "1/4"]])
    assert mat_inv(RatMatrix.from_rows([[1, 0, 0], [3, 1, 0], [3, 2, 1]])) == RatMatrix.from_rows(
        [[1, 0, 0], [-3, 1, 0], [3, -2, 1]]
    )
    with pytest.raises(SingularMatrixError):
        mat_inv(RatMatrix.from_rows([[1, 1], [1, 1]]))
    assert try_inv(RatMatrix.from_rows([[1, 1], [1, 1]])) is None


def test_non_square_is_rejected():
    with pytest.raises(DimensionError):
        mat_det(RatMatrix.zeros(2, 3))
    with pytest.raises(DimensionError):
        mat_inv(RatMatrix.zeros(3, 2))


def test_det_and_inverse_match_sympy():
    rng = random.Random(7)
    for _ in range(60):
        M = _random_matrix(rng, rng.randint(1, 6))
        det = mat_det(M)
        assert det == from_sympy(to_sympy(M).det())
        if det != 0:
            inverse = mat_inv(M)
            assert is_identity(M @ inverse)
            expected = to_sympy(M).inv()
            assert inverse.entries == tuple(from_sympy(v) for v in expected)


def test_inverse_needs_pivot_swap():
    M = RatMatrix.from_rows([[0, 2, 1], [1, 0, 0], [0, 1, "1/3"]])
    assert is_identity(M @ mat_inv(M))


def test_principal_submatrix():
    M = RatMatrix.from_function(3, 3, lambda i, j: 10 * i + j)
    assert principal_submatrix(M, [2, 0]).to_lists() == [[0, 2], [20, 22]]
    with pytest.raises(DimensionError):
        principal_submatrix(M, [])
    with pytest.raises(DimensionError):
        principal_submatrix(M, [3])


def test_schur_complement_inverts_block_of_inverse():
    rng = random.Random(3)
    checked = 0
    while checked < 20:
        M = _random_matrix(rng, 4)
        if mat_det(M) == 0 or mat_det(M.submatrix([2, 3], [2, 3])) == 0:
            continue
        S = schur_complement(M, [0, 1], [2, 3])
        assert mat_inv(S) == mat_inv(M).submatrix([0, 1], [0, 1])
        checked += 1


def test_schur_complement_singular_block():
    M = RatMatrix.from_rows([[1, 0, 0], [0, 1, 1], [0, 1, 1]])
    with pytest.raises(SingularMatrixError):
        schur_complement(M, [0], [1, 2])
    assert schur_complement(M, [0, 1], []) == M.submatrix([0, 1], [0, 1])


def test_det_is_multiplicative():
    rng = random.Random(23)
    for n in (1, 2, 3, 4):
        for _ in range(5):
            M, N = _random_matrix(rng, n), _random_matrix(rng, n)
            assert mat_det(M @ N) == mat_det(M) * mat_det(N)
