"""Tight systems (R, b) and tight matrices.

The system lives on subset-indexed variables x_D and x_D^(j). Boundary
variables are stored only for j not in D: x_D^(j) with j in D *is* the
variable x_{D\\{j}}^(j). Deciding a tight system is one LP: every variable is
at most 1 through the monotone chains down to the constants, so the sum of all
variables reaches the variable count only at the all-ones point.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from reflecto.environment_manager import DEFAULT_DIM_CAP, DEFAULT_SAMPLES, DEFAULT_SEED
from reflecto.errors import (
    DimensionError,
    InconsistencyError,
    InputError,
    MissingVariableError,
    NotCompletelySError,
    RationalParseError,
)
from reflecto.matrix_classes import Thm1Case, is_completely_s, is_m_matrix, thm1_classify, thm2_applicable
from reflecto.rational import RatMatrix, format_rat, rat_parse, to_rational
from reflecto.simplex import Constraint, LinearProgram, LpStatus, Relation, lp_solve

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)
DEFAULT_EPSILON = Fraction(1, 2)


# ---------------------------------------------------------------------------
# variables
# ---------------------------------------------------------------------------

class VarKind(str, Enum):
    PLAIN = "plain"
    BOUNDARY = "boundary"


def _render_set(subset: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(subset)) + "}"


@dataclass(frozen=True)
class VarIndex:
    """x_D (PLAIN) or x_D^(j) (BOUNDARY, j not in D); indices are 0-based"""

    kind: VarKind
    subset: Tuple[int, ...]
    j: Optional[int] = None

    @classmethod
    def plain(cls, subset: Iterable[int]) -> "VarIndex":
        return cls(VarKind.PLAIN, tuple(sorted(set(subset))))

    @classmethod
    def boundary(cls, j: int, subset: Iterable[int]) -> "VarIndex":
        # x_D^(j) = x_{D\{j}}^(j)
        return cls(VarKind.BOUNDARY, tuple(sorted(set(subset) - {j})), j)

    @property
    def is_constant(self) -> bool:
        return not self.subset

    @property
    def effective_set(self) -> Tuple[int, ...]:
        """D for x_D, D ∪ {j} for x_D^(j)"""
        if self.kind is VarKind.PLAIN:
            return self.subset
        return tuple(sorted(self.subset + (self.j,)))

    @property
    def key(self) -> str:
        if self.kind is VarKind.PLAIN:
            return "x" + _render_set(self.subset)
        return "x" + _render_set(self.subset) + f"^({self.j + 1})"

    def __str__(self) -> str:
        return self.key


_KEY = re.compile(r"^x\{([0-9,\s]*)\}(?:\^\((\d+)\))?$")


def parse_var_key(key: str, d: int) -> VarIndex:
    """Parse "x{1,3}" or "x{1,3}^(2)"; non-canonical boundary keys are canonicalized"""
    match = _KEY.match(key.strip())
    if match is None:
        raise InputError(f"malformed variable key {key!r}")
    body = match.group(1).replace(" ", "")
    members = [int(t) for t in body.split(",")] if body else []
    indices = set()
    for m in members:
        if not 1 <= m <= d:
            raise InputError(f"variable key {key!r} names index {m} outside 1..{d}")
        indices.add(m - 1)
    if match.group(2) is None:
        return VarIndex.plain(indices)
    j = int(match.group(2))
    if not 1 <= j <= d:
        raise InputError(f"variable key {key!r} names boundary index {j} outside 1..{d}")
    return VarIndex.boundary(j - 1, indices)


def all_subsets(d: int) -> List[Tuple[int, ...]]:
    """Subsets of range(d) by size, then lexicographically"""
    return [s for k in range(d + 1) for s in combinations(range(d), k)]


def canonical_variables(d: int) -> List[VarIndex]:
    variables = [VarIndex.plain(s) for s in all_subsets(d)]
    for j in range(d):
        others = [i for i in range(d) if i != j]
        variables.extend(
            VarIndex(VarKind.BOUNDARY, s, j)
            for k in range(d)
            for s in combinations(others, k)
        )
    return variables


Assignment = Dict[VarIndex, Fraction]


def all_ones(variables: Iterable[VarIndex]) -> Assignment:
    return {v: ONE for v in variables}


# ---------------------------------------------------------------------------
# system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TightnessSystem:
    d: int
    R: RatMatrix
    b: Tuple[Fraction, ...]
    aux_bounded: bool
    variables: Tuple[VarIndex, ...]
    constraints: Tuple[Constraint, ...]
    lower: Tuple[Optional[Fraction], ...]
    upper: Tuple[Optional[Fraction], ...]
    position: Mapping[VarIndex, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    def to_program(self) -> LinearProgram:
        """minimize the sum of all variables"""
        return LinearProgram(
            objective=(ONE,) * self.variable_count,
            constraints=self.constraints,
            lower=self.lower,
            upper=self.upper,
        )

    def vector(self, assignment: Mapping[VarIndex, Fraction]) -> Tuple[Fraction, ...]:
        values = []
        for v in self.variables:
            if v not in assignment:
                raise MissingVariableError(v.key)
            values.append(to_rational(assignment[v]))
        return tuple(values)

    def assignment(self, vector: Sequence[Fraction]) -> Assignment:
        return dict(zip(self.variables, vector))


def _check_inputs(R: RatMatrix, b: Sequence) -> Tuple[Fraction, ...]:
    if not R.is_square or R.rows < 1:
        raise DimensionError(f"R must be a nonempty square matrix, got {R.rows}x{R.cols}")
    b = tuple(to_rational(v) for v in b)
    if len(b) != R.rows:
        raise DimensionError(f"b has {len(b)} entries, R is {R.rows}x{R.rows}")
    for i, v in enumerate(b):
        if v <= 0:
            raise InputError(f"b[{i + 1}] = {format_rat(v)} is not positive")
    return b


def build_system(R: RatMatrix, b: Sequence, aux_bounded: bool = True) -> TightnessSystem:
    """
    Build the linear system whose only solution must be all-ones

    Args:
        R: d×d reflection matrix
        b: positive vector of length d
        aux_bounded: also impose x_D^(j) in [0,1]; otherwise boundary variables
            are bounded only through monotonicity and the constants

    Returns:
        TightnessSystem: variables, named constraints and bounds
    """
    b = _check_inputs(R, b)
    d = R.rows
    variables = canonical_variables(d)
    position = {v: k for k, v in enumerate(variables)}
    n = len(variables)
    constraints: List[Constraint] = []

    # equilibrium rows: sum_j R_ij b_j (x_D^(j) - x_D) = 0 for i in D
    for D in all_subsets(d):
        if not D:
            continue
        plain = position[VarIndex.plain(D)]
        for i in D:
            coeffs = [ZERO] * n
            for j in range(d):
                w = R[i, j] * b[j]
                if not w:
                    continue
                coeffs[position[VarIndex.boundary(j, D)]] += w
                coeffs[plain] -= w
            constraints.append(Constraint(tuple(coeffs), Relation.EQ, ZERO, f"eq(D={_render_set(D)},i={i + 1})"))

    # monotonicity on cover pairs D ⊂ D ∪ {m}
    def mono(upper_var: VarIndex, lower_var: VarIndex):
        coeffs = [ZERO] * n
        coeffs[position[upper_var]] = ONE
        coeffs[position[lower_var]] = -ONE
        constraints.append(Constraint(tuple(coeffs), Relation.GE, ZERO, f"mono({upper_var.key}>={lower_var.key})"))

    for v in variables:
        for m in range(d):
            if m in v.subset or m == v.j:
                continue
            bigger = v.subset + (m,)
            mono(v, VarIndex.plain(bigger) if v.kind is VarKind.PLAIN else VarIndex.boundary(v.j, bigger))

    lower: List[Optional[Fraction]] = []
    upper: List[Optional[Fraction]] = []
    for v in variables:
        if v.is_constant:
            lower.append(ONE)
            upper.append(ONE)
        elif v.kind is VarKind.PLAIN or aux_bounded:
            lower.append(ZERO)
            upper.append(ONE)
        else:
            lower.append(None)
            upper.append(None)

    system = TightnessSystem(
        d=d, R=R, b=b, aux_bounded=aux_bounded,
        variables=tuple(variables), constraints=tuple(constraints),
        lower=tuple(lower), upper=tuple(upper), position=position,
    )
    if not system.to_program().is_feasible_point((ONE,) * n):
        raise InconsistencyError("all-ones assignment is infeasible for a freshly built system")
    logger.debug(f"tightness system d={d}: {n} variables, {len(constraints)} constraints")
    return system


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[ConstraintCheck, ...]
    is_all_ones: bool

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    @property
    def first_failure(self) -> Optional[str]:
        return next((c.name for c in self.checks if not c.passed), None)

    @property
    def is_nontrivial_witness(self) -> bool:
        return self.passed and not self.is_all_ones


def verify_assignment(system: TightnessSystem, assignment: Mapping[VarIndex, Fraction]) -> VerificationReport:
    """
    Check an assignment against every constraint, bound and constant exactly

    Raises:
        MissingVariableError: naming the first variable (in system order) without a value
    """
    x = system.vector(assignment)
    checks: List[ConstraintCheck] = []
    for v, value, lo, hi in zip(system.variables, x, system.lower, system.upper):
        if v.is_constant:
            checks.append(ConstraintCheck(f"const({v.key})", value == ONE))
        elif lo is not None or hi is not None:
            ok = (lo is None or value >= lo) and (hi is None or value <= hi)
            checks.append(ConstraintCheck(f"bound({v.key})", ok))
    for c in system.constraints:
        checks.append(ConstraintCheck(c.name, c.holds(x)))
    return VerificationReport(checks=tuple(checks), is_all_ones=all(v == ONE for v in x))


# ---------------------------------------------------------------------------
# tight-system decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TightnessVerdict:
    tight: bool
    optimum: Optional[Fraction]
    variable_count: int
    lp_status: LpStatus
    b: Tuple[Fraction, ...]
    witness: Optional[Assignment] = None


def check_tight_system(R: RatMatrix, b: Sequence, aux_bounded: bool = True) -> TightnessVerdict:
    """
    Decide whether (R, b) is a tight system with one exact LP

    Returns:
        TightnessVerdict: tight iff the minimum of the variable sum equals the
        variable count; otherwise carries a verified non-all-ones witness
    """
    system = build_system(R, b, aux_bounded)
    count = system.variable_count
    outcome = lp_solve(system.to_program())
    logger.info(f"tight-system LP for b={[format_rat(v) for v in system.b]}: {outcome.status.value} "
                f"(optimum {outcome.optimum}, {outcome.pivots} pivots)")

    if outcome.status is LpStatus.INFEASIBLE:
        raise InconsistencyError("tight-system LP is infeasible although all-ones is feasible")

    if outcome.status is LpStatus.OPTIMAL:
        if outcome.optimum > count:
            raise InconsistencyError(f"LP minimum {outcome.optimum} exceeds the variable count {count}")
        if outcome.optimum == count:
            return TightnessVerdict(True, outcome.optimum, count, outcome.status, system.b)
        point = outcome.solution
    else:
        shifted = tuple(p + r for p, r in zip(outcome.solution, outcome.ray))
        point = shifted if any(v != ONE for v in shifted) else outcome.solution

    witness = system.assignment(point)
    report = verify_assignment(system, witness)
    if not report.is_nontrivial_witness:
        logger.error(f"extracted witness fails: {report.failures[:5]}")
        raise InconsistencyError("extracted non-tightness witness does not verify")
    return TightnessVerdict(False, outcome.optimum, count, outcome.status, system.b, witness)


def absorb_b(R: RatMatrix, b: Sequence) -> RatMatrix:
    """R·diag(b); (R, b) and (R·diag(b), 1) give the same equilibrium rows"""
    return R.scale_columns(_check_inputs(R, b))


# ---------------------------------------------------------------------------
# explicit witnesses
# ---------------------------------------------------------------------------

def case_d_witness(R: RatMatrix, b: Sequence, epsilon: Fraction = DEFAULT_EPSILON) -> Assignment:
    """
    Explicit non-all-ones solution for a 2×2 matrix in the completely-S but not tight case

    With α1 = R12 b2 / (R11 b1) and α2 = R21 b1 / (R22 b2):
    x{1} = (εα1 + 1)/(α1 + 1), x{2} = (εα2 + 1)/(α2 + 1), x{1,2} = x{2}^(1) = x{1}^(2) = ε.
    """
    b = _check_inputs(R, b)
    case = thm1_classify(R)
    if case is not Thm1Case.D_CS_NOT_TIGHT:
        raise InputError(f"explicit 2x2 witness needs the D_CSNotTight case, matrix is {case.value}")
    epsilon = to_rational(epsilon)
    if not ZERO < epsilon <= ONE:
        raise InputError(f"epsilon must lie in (0,1], got {format_rat(epsilon)}")
    alpha1 = R[0, 1] * b[1] / (R[0, 0] * b[0])
    alpha2 = R[1, 0] * b[0] / (R[1, 1] * b[1])
    return {
        VarIndex.plain(()): ONE,
        VarIndex.plain((0,)): (epsilon * alpha1 + 1) / (alpha1 + 1),
        VarIndex.plain((1,)): (epsilon * alpha2 + 1) / (alpha2 + 1),
        VarIndex.plain((0, 1)): epsilon,
        VarIndex.boundary(0, ()): ONE,
        VarIndex.boundary(0, (1,)): epsilon,
        VarIndex.boundary(1, ()): ONE,
        VarIndex.boundary(1, (0,)): epsilon,
    }


def column_closure(R: RatMatrix, j: int) -> Tuple[int, ...]:
    """Smallest index set containing j whose columns of R vanish outside it"""
    d = R.rows
    closed = {j}
    frontier = [j]
    while frontier:
        col = frontier.pop()
        for i in range(d):
            if i not in closed and R[i, col] != 0:
                closed.add(i)
                frontier.append(i)
    return tuple(sorted(closed))


def is_column_closed(R: RatMatrix, indices: Iterable[int]) -> bool:
    inside = set(indices)
    return all(R[i, j] == 0 for j in inside for i in range(R.rows) if i not in inside)


def decoupled_sets(R: RatMatrix) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    First pair of disjoint column-closed index sets, if any

    Covers block-diagonal (reducible) R as well as two columns vanishing off
    the diagonal. Two disjoint closed sets exist iff two single-index closures
    are disjoint, so only those are compared.
    """
    closures = [column_closure(R, j) for j in range(R.rows)]
    for a in range(R.rows):
        for b in range(a + 1, R.rows):
            if not set(closures[a]) & set(closures[b]):
                return closures[a], closures[b]
    return None


def decoupled_witness(
    R: RatMatrix,
    sets: Tuple[Sequence[int], Sequence[int]],
    epsilon: Fraction = DEFAULT_EPSILON,
) -> Assignment:
    """
    Non-all-ones solution for any b when R has two disjoint column-closed sets

    Every variable whose effective set meets both sets takes ε, the rest take 1.
    A row i of D only sees the change through R[i][j] with j in the set D does
    not meet yet and i outside it, and those entries are zero.
    """
    first, second = (tuple(s) for s in sets)
    if not first or not second or set(first) & set(second):
        raise InputError("decoupled sets must be nonempty and disjoint")
    for s in (first, second):
        if not is_column_closed(R, s):
            raise InputError(f"columns {[j + 1 for j in s]} do not vanish outside their own rows")
    epsilon = to_rational(epsilon)
    if not ZERO < epsilon < ONE:
        raise InputError(f"epsilon must lie in (0,1), got {format_rat(epsilon)}")
    first_set, second_set = set(first), set(second)
    return {
        v: epsilon if first_set.intersection(v.effective_set) and second_set.intersection(v.effective_set) else ONE
        for v in canonical_variables(R.rows)
    }


def witness_family(R: RatMatrix, b: Sequence, epsilons: Iterable[Fraction]) -> List[Assignment]:
    return [case_d_witness(R, b, eps) for eps in epsilons]


def fbfs_example_witness(t: Fraction = DEFAULT_EPSILON) -> Assignment:
    """
    Non-all-ones solution for R = [[1,0,0],[-3,1,0],[3,-2,1]], b = 1

    x{3} = (1 + t)/2; a variable whose effective set contains 3 and another
    index takes t; everything else is 1. t = 1/2 is the classic counterexample.
    """
    t = to_rational(t)
    if not ZERO <= t < ONE:
        raise InputError(f"t must lie in [0,1), got {format_rat(t)}")
    out: Assignment = {}
    for v in canonical_variables(3):
        s = v.effective_set
        if v == VarIndex.plain((2,)):
            out[v] = (1 + t) / 2
        elif 2 in s and len(s) >= 2:
            out[v] = t
        else:
            out[v] = ONE
    return out


# ---------------------------------------------------------------------------
# witness tables
# ---------------------------------------------------------------------------

def assignment_to_table(system: TightnessSystem, assignment: Mapping[VarIndex, Fraction]) -> Dict[str, str]:
    """Key → canonical rational string, in system variable order"""
    return {v.key: format_rat(assignment[v]) for v in system.variables if v in assignment}


def table_to_assignment(table: Mapping[str, str], d: int) -> Assignment:
    """
    Read a witness table; non-canonical boundary keys are folded onto their
    canonical variable and conflicting values are rejected
    """
    out: Assignment = {}
    origin: Dict[VarIndex, str] = {}
    for key, raw in table.items():
        v = parse_var_key(key, d)
        try:
            value = rat_parse(raw)
        except RationalParseError as e:
            raise InputError(f"{key}: {e}") from e
        if v in out and out[v] != value:
            raise InputError(
                f"{key} = {raw} conflicts with {origin[v]} = {format_rat(out[v])} (same variable {v.key})"
            )
        out[v] = value
        origin.setdefault(v, key)
    return out


def relabel_assignment(assignment: Mapping[VarIndex, Fraction], order: Sequence[int]) -> Assignment:
    """
    Rename indices of a solution: index i becomes order[i]

    A solution of (R, b) becomes a solution of the system whose matrix has
    entry R[i][j] at (order[i], order[j]) and whose b has b[i] at order[i].
    """
    out: Assignment = {}
    for v, value in assignment.items():
        subset = [order[i] for i in v.subset]
        if v.kind is VarKind.PLAIN:
            out[VarIndex.plain(subset)] = value
        else:
            out[VarIndex.boundary(order[v.j], subset)] = value
    return out


def relabel_vector(values: Sequence[Fraction], order: Sequence[int]) -> Tuple[Fraction, ...]:
    out: List[Fraction] = [ZERO] * len(values)
    for i, value in enumerate(values):
        out[order[i]] = value
    return tuple(out)


# ---------------------------------------------------------------------------
# tight-matrix decision
# ---------------------------------------------------------------------------

class DecisionStatus(str, Enum):
    TIGHT_PROVEN = "TightProven"
    NOT_TIGHT = "NotTight"
    UNKNOWN_SAMPLED = "UnknownSampled"


class ProofMethod(str, Enum):
    THM1 = "Thm1"
    THM2 = "Thm2"
    M_MATRIX = "MMatrix"
    D1_TRIVIAL = "D1Trivial"


@dataclass(frozen=True)
class TightMatrixDecision:
    status: DecisionStatus
    method: Optional[ProofMethod] = None
    b_witness: Optional[Tuple[Fraction, ...]] = None
    witness: Optional[Assignment] = None
    tested_b: Tuple[Tuple[Fraction, ...], ...] = ()
    aux_bounded: bool = True

    @property
    def all_tight(self) -> bool:
        return self.status is DecisionStatus.UNKNOWN_SAMPLED


def sample_b_vectors(d: int, count: int, seed: int = DEFAULT_SEED) -> List[Tuple[Fraction, ...]]:
    """count random positive vectors with entries u/v, u and v uniform on 1..16"""
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(1, 16), rng.randint(1, 16)) for _ in range(d)) for _ in range(count)]


def decide_tight_matrix(
    R: RatMatrix,
    sample_count: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    aux_bounded: bool = True,
    epsilon: Fraction = DEFAULT_EPSILON,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> TightMatrixDecision:
    """
    Layered decision: d = 1, the 2×2 classification, disjoint column-closed
    index sets (never tight), the banded P-matrix pattern, and finally the LP
    oracle on b = 1 plus sampled b

    An M-matrix is only reported as TightProven(MMatrix) when the LP finds
    every tested b tight; sparse and reducible M-matrices can fail the system.

    Raises:
        NotCompletelySError: R is not completely-S, so tightness is undefined
    """
    if not R.is_square or R.rows < 1:
        raise DimensionError(f"R must be a nonempty square matrix, got {R.rows}x{R.cols}")
    d = R.rows

    if d == 1:
        if R[0, 0] > 0:
            return TightMatrixDecision(DecisionStatus.TIGHT_PROVEN, ProofMethod.D1_TRIVIAL, aux_bounded=aux_bounded)
        raise NotCompletelySError((0,))

    if d == 2:
        case = thm1_classify(R)
        logger.info(f"2x2 classification: {case.value}")
        if case in (Thm1Case.E_NOT_CS, Thm1Case.DIAGONAL_FAIL):
            raise NotCompletelySError(is_completely_s(R, dim_cap)[1])
        sets = decoupled_sets(R)
        if sets is not None:
            return _explicit_not_tight(R, decoupled_witness(R, sets, epsilon), aux_bounded, "diagonal 2x2")
        if case.is_tight:
            return TightMatrixDecision(DecisionStatus.TIGHT_PROVEN, ProofMethod.THM1, aux_bounded=aux_bounded)
        return _explicit_not_tight(R, case_d_witness(R, (ONE, ONE), epsilon), aux_bounded, "2x2 case D")

    cs, failing = is_completely_s(R, dim_cap)
    if not cs:
        raise NotCompletelySError(failing)
    sets = decoupled_sets(R)
    if sets is not None:
        logger.info(f"columns {[j + 1 for j in sets[0]]} and {[j + 1 for j in sets[1]]} are decoupled")
        return _explicit_not_tight(R, decoupled_witness(R, sets, epsilon), aux_bounded, "decoupled columns")
    if thm2_applicable(R, dim_cap):
        logger.info("banded P-matrix pattern holds")
        return TightMatrixDecision(DecisionStatus.TIGHT_PROVEN, ProofMethod.THM2, aux_bounded=aux_bounded)

    m_matrix = is_m_matrix(R, dim_cap)
    candidates = [(ONE,) * d] + sample_b_vectors(d, sample_count, seed)
    tested = []
    for b in candidates:
        verdict = check_tight_system(R, b, aux_bounded)
        tested.append(verdict.b)
        if not verdict.tight:
            logger.info(f"not tight for b={[format_rat(v) for v in verdict.b]}")
            return TightMatrixDecision(
                DecisionStatus.NOT_TIGHT,
                b_witness=verdict.b,
                witness=verdict.witness,
                tested_b=tuple(tested),
                aux_bounded=aux_bounded,
            )
    if m_matrix:
        logger.info(f"M-matrix, tight for all {len(tested)} tested b vectors")
        return TightMatrixDecision(
            DecisionStatus.TIGHT_PROVEN, ProofMethod.M_MATRIX, tested_b=tuple(tested), aux_bounded=aux_bounded
        )
    logger.warning(f"tight for all {len(tested)} tested b vectors, but no theorem covers this matrix")
    return TightMatrixDecision(DecisionStatus.UNKNOWN_SAMPLED, tested_b=tuple(tested), aux_bounded=aux_bounded)


def _explicit_not_tight(R: RatMatrix, witness: Assignment, aux_bounded: bool, source: str) -> TightMatrixDecision:
    ones = (ONE,) * R.rows
    if not verify_assignment(build_system(R, ones, aux_bounded), witness).is_nontrivial_witness:
        raise InconsistencyError(f"explicit {source} witness does not verify")
    return TightMatrixDecision(DecisionStatus.NOT_TIGHT, b_witness=ones, witness=witness, aux_bounded=aux_bounded)
