"""Fraction-free (Bareiss) determinant and inverse, principal submatrices.

Rows are first scaled to integers by the lcm of their denominators, so the
elimination runs on Python ints where every division is exact.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Sequence, Tuple

from reflecto.errors import DimensionError, InconsistencyError, SingularMatrixError
from reflecto.rational import RatMatrix

logger = logging.getLogger(__name__)


def _require_square(M: RatMatrix, op: str):
    if not M.is_square:
        raise DimensionError(f"{op} needs a square matrix, got {M.rows}x{M.cols}")


def _integer_rows(M: RatMatrix) -> Tuple[List[List[int]], List[int]]:
    """Scale each row by the lcm of its denominators; returns (int rows, scale factors)"""
    rows, scales = [], []
    for r in M.iter_rows():
        s = lcm(*(v.denominator for v in r)) if r else 1
        rows.append([int(v * s) for v in r])
        scales.append(s)
    return rows, scales


def _exact_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if rem:
        raise InconsistencyError(f"Bareiss division {a}/{b} is not exact")
    return q


def bareiss_det_int(rows: List[List[int]]) -> int:
    """Determinant of an integer matrix; works on a copy"""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev)
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def mat_det(M: RatMatrix) -> Fraction:
    """
    Exact determinant of a square rational matrix

    Args:
        M: square RatMatrix

    Returns:
        Fraction: det(M)
    """
    _require_square(M, "determinant")
    if M.rows == 0:
        return Fraction(1)
    rows, scales = _integer_rows(M)
    scale = 1
    for s in scales:
        scale *= s
    return Fraction(bareiss_det_int(rows), scale)


def mat_inv(M: RatMatrix) -> RatMatrix:
    """
    Exact inverse by fraction-free Gauss-Jordan elimination on [M_int | I]

    After the sweep the left block is det·I and the right block is det·M_int⁻¹.
    With M = diag(s)⁻¹·M_int this gives M⁻¹ = M_int⁻¹·diag(s).

    Raises:
        SingularMatrixError: when det(M) = 0
    """
    _require_square(M, "inverse")
    n = M.rows
    rows, scales = _integer_rows(M)
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    width = 2 * n
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if aug[r][k] != 0), None)
            if swap is None:
                raise SingularMatrixError("matrix is singular (determinant 0)")
            aug[k], aug[swap] = aug[swap], aug[k]
        pivot_row = aug[k]
        pivot = pivot_row[k]
        for i in range(n):
            if i == k:
                continue
            row = aug[i]
            factor = row[k]
            for j in range(width):
                row[j] = _exact_div(pivot * row[j] - factor * pivot_row[j], prev)
        prev = pivot
    # the last pivot's row was never rescaled; every diagonal entry now equals it
    d = prev
    out = [Fraction(aug[i][n + j] * scales[j], aug[i][i]) for i in range(n) for j in range(n)]
    if any(aug[i][i] != d for i in range(n)):
        raise InconsistencyError("fraction-free Gauss-Jordan left an unequal diagonal")
    return RatMatrix(n, n, tuple(out))


def try_inv(M: RatMatrix):
    """Inverse or None when singular"""
    try:
        return mat_inv(M)
    except SingularMatrixError:
        return None


def principal_submatrix(M: RatMatrix, subset: Iterable[int]) -> RatMatrix:
    """
    Rows and columns of M indexed by subset, in ascending index order

    Args:
        M: square matrix
        subset: nonempty collection of 0-based indices
    """
    _require_square(M, "principal submatrix")
    idx = sorted(set(subset))
    if not idx:
        raise DimensionError("principal submatrix needs a nonempty index set")
    if idx[0] < 0 or idx[-1] >= M.rows:
        raise DimensionError(f"index set {[i + 1 for i in idx]} out of range for dimension {M.rows}")
    return M.submatrix(idx, idx)


def schur_complement(M: RatMatrix, keep: Sequence[int], eliminate: Sequence[int]) -> RatMatrix:
    """
    M_keep − M_{keep,elim} · M_elim⁻¹ · M_{elim,keep}

    Index lists are used in the order given. Raises SingularMatrixError when
    the eliminated block is singular.
    """
    _require_square(M, "Schur complement")
    keep, eliminate = list(keep), list(eliminate)
    block = M.submatrix(keep, keep)
    if not eliminate:
        return block
    elim_inv = mat_inv(M.submatrix(eliminate, eliminate))
    correction = M.submatrix(keep, eliminate) @ elim_inv @ M.submatrix(eliminate, keep)
    return block - correction


def is_identity(M: RatMatrix) -> bool:
    return M.is_square and M == RatMatrix.identity(M.rows)
