"""Matrix-class certificates: S, completely-S, P, M, positive definite.

Also the sign-pattern tests behind the two tightness theorems: the full
2×2 classification and the banded lower-Hessenberg pattern for general d.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import chain, combinations
from typing import List, Optional, Tuple

from reflecto.environment_manager import DEFAULT_DIM_CAP
from reflecto.errors import DimensionCapError, DimensionError, InconsistencyError
from reflecto.linalg import mat_det, principal_submatrix
from reflecto.rational import RatMatrix
from reflecto.simplex import Constraint, LinearProgram, Relation, feasible

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


class Thm1Case(str, Enum):
    B_TIGHT_CS = "B_TightCS"
    C_TIGHT_CS = "C_TightCS"
    D_CS_NOT_TIGHT = "D_CSNotTight"
    E_NOT_CS = "E_NotCS"
    DIAGONAL_FAIL = "DiagonalFail"

    @property
    def is_tight(self) -> bool:
        return self in (Thm1Case.B_TIGHT_CS, Thm1Case.C_TIGHT_CS)


@dataclass(frozen=True)
class ClassReport:
    is_completely_s: bool
    is_p: bool
    is_m: bool
    is_positive_definite: bool
    s_failure: Optional[Subset] = None
    p_failure: Optional[Subset] = None

    @property
    def failing_subset(self) -> Optional[Subset]:
        """First principal submatrix refuting completely-S, else the one refuting P"""
        return self.s_failure if self.s_failure is not None else self.p_failure


def _require_square(M: RatMatrix):
    if not M.is_square or M.rows < 1:
        raise DimensionError(f"expected a nonempty square matrix, got {M.rows}x{M.cols}")


def check_dim_cap(d: int, dim_cap: int):
    if d > dim_cap:
        raise DimensionCapError(d, dim_cap)


def principal_subsets(d: int) -> List[Subset]:
    """All nonempty index subsets of range(d) in lexicographic order"""
    return sorted(chain.from_iterable(combinations(range(d), k) for k in range(1, d + 1)))


def is_s_matrix(C: RatMatrix) -> bool:
    """
    True iff some x > 0 has Cx > 0

    Decided through the closed system {x >= 0, Cx >= 1}: a solution can be
    nudged to x + ε1 while keeping Cx > 0, and any strict solution scales
    into the closed one.
    """
    _require_square(C)
    n = C.rows
    rows = tuple(
        Constraint(coeffs=C.row(i), relation=Relation.GE, rhs=Fraction(1), name=f"row{i + 1}")
        for i in range(n)
    )
    return feasible(LinearProgram(objective=(Fraction(0),) * n, constraints=rows))


def is_completely_s(M: RatMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> Tuple[bool, Optional[Subset]]:
    """
    Check every principal submatrix for the S property

    Returns:
        (True, None) or (False, lexicographically first failing subset)
    """
    _require_square(M)
    check_dim_cap(M.rows, dim_cap)
    for subset in principal_subsets(M.rows):
        if not is_s_matrix(principal_submatrix(M, subset)):
            logger.debug(f"completely-S fails on {subset}")
            return False, subset
    return True, None


def is_p_matrix(M: RatMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> Tuple[bool, Optional[Subset]]:
    _require_square(M)
    check_dim_cap(M.rows, dim_cap)
    for subset in principal_subsets(M.rows):
        if mat_det(principal_submatrix(M, subset)) <= 0:
            return False, subset
    return True, None


def has_nonpositive_off_diagonal(M: RatMatrix) -> bool:
    return all(M[i, j] <= 0 for i in range(M.rows) for j in range(M.cols) if i != j)


def is_m_matrix(M: RatMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> bool:
    _require_square(M)
    # sign check first; it is cheap and settles most non-M inputs
    if not has_nonpositive_off_diagonal(M):
        return False
    return is_p_matrix(M, dim_cap)[0]


def is_positive_definite(M: RatMatrix) -> bool:
    """Sylvester's criterion on the symmetric part (M + M')/2"""
    _require_square(M)
    sym = (M + M.transpose()).scale(Fraction(1, 2))
    return all(mat_det(principal_submatrix(sym, range(k))) > 0 for k in range(1, M.rows + 1))


def classify(M: RatMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> ClassReport:
    """
    Full class report for a square matrix

    Raises:
        InconsistencyError: if the class inclusions M ⊂ P ⊂ completely-S break
    """
    cs, s_fail = is_completely_s(M, dim_cap)
    p, p_fail = is_p_matrix(M, dim_cap)
    m = p and has_nonpositive_off_diagonal(M)
    report = ClassReport(
        is_completely_s=cs,
        is_p=p,
        is_m=m,
        is_positive_definite=is_positive_definite(M),
        s_failure=s_fail,
        p_failure=p_fail,
    )
    if (m and not p) or (p and not cs):
        logger.error(f"class inclusion violated: {report}")
        raise InconsistencyError("class inclusions M ⊂ P ⊂ completely-S violated")
    return report


def thm1_classify(R: RatMatrix) -> Thm1Case:
    """
    Classify a 2×2 matrix into exactly one of the sign cases of the d = 2 theorem

    Args:
        R: 2×2 matrix

    Returns:
        Thm1Case: DiagonalFail when a diagonal entry is not positive
    """
    if R.shape != (2, 2):
        raise DimensionError(f"2x2 classification needs a 2x2 matrix, got {R.rows}x{R.cols}")
    r11, r12, r21, r22 = R.entries
    if not (r11 > 0 and r22 > 0):
        return Thm1Case.DIAGONAL_FAIL
    det = r11 * r22 - r12 * r21
    if r12 <= 0 and r21 <= 0:
        return Thm1Case.B_TIGHT_CS if det > 0 else Thm1Case.E_NOT_CS
    if (r12 < 0 < r21) or (r21 < 0 < r12):
        return Thm1Case.C_TIGHT_CS
    # both off-diagonals nonnegative, at least one positive
    return Thm1Case.D_CS_NOT_TIGHT


def thm2_pattern(R: RatMatrix) -> bool:
    """Positive diagonal, negative subdiagonal, zeros below it; above is free"""
    _require_square(R)
    d = R.rows
    for i in range(d):
        if R[i, i] <= 0:
            return False
        if i >= 1 and R[i, i - 1] >= 0:
            return False
        if any(R[i, j] != 0 for j in range(i - 1)):
            return False
    return True


def thm2_applicable(R: RatMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> bool:
    """True iff R is a P-matrix with the banded sign pattern of the general-d theorem"""
    return thm2_pattern(R) and is_p_matrix(R, dim_cap)[0]


def normalize_diagonal(R: RatMatrix) -> RatMatrix:
    """diag(R)⁻¹·R; keeps signs and the sign of every principal minor"""
    _require_square(R)
    if any(v <= 0 for v in R.diagonal()):
        raise DimensionError("diagonal normalization needs a positive diagonal")
    return RatMatrix.from_function(R.rows, R.cols, lambda i, j: R[i, j] / R[i, i])
