"""Exact two-phase simplex over the rationals.

Pivoting follows Bland's least-index rule in both phases, so a given program
always walks the same path and returns the same vertex.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from reflecto.errors import DimensionError, InconsistencyError, InputError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction
    name: str = ""

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x) if a), ZERO)

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = self.evaluate(x)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """
    minimize objective·x subject to constraints and per-variable bounds

    A bound of None means unbounded on that side; the default lower bound is 0.
    """

    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...] = ()
    lower: Optional[Tuple[Optional[Fraction], ...]] = None
    upper: Optional[Tuple[Optional[Fraction], ...]] = None

    def __post_init__(self):
        n = len(self.objective)
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise DimensionError(
                    f"constraint {c.name or '?'} has {len(c.coeffs)} coefficients for {n} variables"
                )
        if self.lower is None:
            object.__setattr__(self, "lower", (ZERO,) * n)
        if self.upper is None:
            object.__setattr__(self, "upper", (None,) * n)
        if len(self.lower) != n or len(self.upper) != n:
            raise DimensionError("bound vectors must match the variable count")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo is not None and hi is not None and lo > hi:
                raise InputError(f"variable {j} has lower bound {lo} above upper bound {hi}")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars:
            return False
        for v, lo, hi in zip(x, self.lower, self.upper):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return all(c.holds(x) for c in self.constraints)


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    optimum: Optional[Fraction] = None
    solution: Optional[Tuple[Fraction, ...]] = None
    # Unbounded: solution is a feasible point and ray an improving direction
    ray: Optional[Tuple[Fraction, ...]] = None
    pivots: int = 0


@dataclass
class _Column:
    """How an original variable is expressed through standard-form columns"""

    offset: Fraction
    terms: List[Tuple[int, Fraction]] = field(default_factory=list)


class _Tableau:
    def __init__(self, rows: List[List[Fraction]], basis: List[int], width: int):
        self.rows = rows
        self.basis = basis
        self.width = width
        self.pivots = 0

    def pivot(self, r: int, col: int, extra_rows: Sequence[List[Fraction]]):
        prow = self.rows[r]
        p = prow[col]
        if p != ONE:
            inv = ONE / p
            for j in range(self.width + 1):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(self.width + 1) if prow[j]]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        for row in extra_rows:
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = col
        self.pivots += 1

    def run(self, obj: List[Fraction], allowed: Sequence[bool]) -> Tuple[str, Optional[int]]:
        """Bland's rule on a minimization objective row of reduced costs"""
        while True:
            entering = next((j for j in range(self.width) if allowed[j] and obj[j] < 0), None)
            if entering is None:
                return "optimal", None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded", entering
            self.pivot(best[1], entering, [obj])


def _standard_columns(prob: LinearProgram) -> Tuple[List[_Column], int, List[Tuple[int, Fraction]]]:
    """Shift/split every variable to nonnegative columns; returns upper-bound rows too"""
    cols: List[_Column] = []
    upper_rows: List[Tuple[int, Fraction]] = []
    n_std = 0
    for lo, hi in zip(prob.lower, prob.upper):
        if lo is not None:
            col = _Column(offset=lo, terms=[(n_std, ONE)])
            if hi is not None:
                upper_rows.append((n_std, hi - lo))
            n_std += 1
        elif hi is not None:
            col = _Column(offset=hi, terms=[(n_std, -ONE)])
            n_std += 1
        else:
            col = _Column(offset=ZERO, terms=[(n_std, ONE), (n_std + 1, -ONE)])
            n_std += 2
        cols.append(col)
    return cols, n_std, upper_rows


def lp_solve(prob: LinearProgram) -> LpOutcome:
    """
    Solve a linear program exactly

    Args:
        prob: the program (minimization)

    Returns:
        LpOutcome: Optimal with vertex, Infeasible, or Unbounded with a feasible
        point and an improving ray
    """
    cols, n_std, upper_rows = _standard_columns(prob)

    # rows over standard columns: (coeff dict, relation, rhs)
    raw: List[Tuple[Dict[int, Fraction], Relation, Fraction]] = []
    for c in prob.constraints:
        coeffs: Dict[int, Fraction] = {}
        rhs = c.rhs
        for v, a in enumerate(c.coeffs):
            if not a:
                continue
            rhs -= a * cols[v].offset
            for k, s in cols[v].terms:
                coeffs[k] = coeffs.get(k, ZERO) + a * s
        raw.append(({k: a for k, a in coeffs.items() if a}, c.relation, rhs))
    for k, bound in upper_rows:
        raw.append(({k: ONE}, Relation.LE, bound))

    # normalize to rhs >= 0; zero-rhs >= rows are flipped so a slack can start basic
    normalized = []
    for coeffs, rel, rhs in raw:
        if rhs < 0 or (rhs == 0 and rel is Relation.GE):
            coeffs = {k: -a for k, a in coeffs.items()}
            rhs = -rhs
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}[rel]
        normalized.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in normalized if rel is not Relation.EQ)
    n_art = sum(1 for _, rel, _ in normalized if rel is not Relation.LE)
    width = n_std + n_slack + n_art
    art_start = n_std + n_slack

    rows: List[List[Fraction]] = []
    basis: List[int] = []
    s_next, a_next = n_std, art_start
    for coeffs, rel, rhs in normalized:
        row = [ZERO] * (width + 1)
        for k, a in coeffs.items():
            row[k] = a
        row[-1] = rhs
        if rel is Relation.LE:
            row[s_next] = ONE
            basis.append(s_next)
            s_next += 1
        else:
            if rel is Relation.GE:
                row[s_next] = -ONE
                s_next += 1
            row[a_next] = ONE
            basis.append(a_next)
            a_next += 1
        rows.append(row)

    tab = _Tableau(rows, basis, width)
    logger.debug(f"simplex: {len(rows)} rows, {width} columns ({n_art} artificial)")

    # Phase 1
    if n_art:
        phase1 = [ZERO] * (width + 1)
        for j in range(art_start, width):
            phase1[j] = ONE
        for row, b in zip(tab.rows, tab.basis):
            if b >= art_start:
                for j in range(width + 1):
                    if row[j]:
                        phase1[j] -= row[j]
        tab.run(phase1, [True] * width)
        if -phase1[-1] != 0:
            logger.debug(f"simplex: infeasible after {tab.pivots} pivots")
            return LpOutcome(LpStatus.INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis, dropping redundant rows
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= art_start:
                row = tab.rows[r]
                col = next((j for j in range(art_start) if row[j]), None)
                if col is None:
                    del tab.rows[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, col, [])
            r += 1

    allowed = [j < art_start for j in range(width)]

    # Phase 2
    c_std = [ZERO] * (width + 1)
    constant = ZERO
    for v, c in enumerate(prob.objective):
        if not c:
            continue
        constant += c * cols[v].offset
        for k, s in cols[v].terms:
            c_std[k] += c * s
    obj = list(c_std)
    for row, b in zip(tab.rows, tab.basis):
        cb = c_std[b]
        if cb:
            for j in range(width + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    status, entering = tab.run(obj, allowed)

    std_x = [ZERO] * width
    for row, b in zip(tab.rows, tab.basis):
        std_x[b] = row[-1]
    point = _recover(cols, std_x)

    if status == "unbounded":
        direction = [ZERO] * width
        direction[entering] = ONE
        for row, b in zip(tab.rows, tab.basis):
            if row[entering]:
                direction[b] = -row[entering]
        ray = tuple(sum((s * direction[k] for k, s in col.terms), ZERO) for col in cols)
        logger.debug(f"simplex: unbounded after {tab.pivots} pivots")
        return LpOutcome(LpStatus.UNBOUNDED, solution=point, ray=ray, pivots=tab.pivots)

    if not prob.is_feasible_point(point):
        raise InconsistencyError("simplex returned a point that violates its own program")
    optimum = sum((c * v for c, v in zip(prob.objective, point)), ZERO)
    if optimum != constant - obj[-1]:
        raise InconsistencyError("simplex objective bookkeeping disagrees with the returned vertex")
    logger.debug(f"simplex: optimal {optimum} after {tab.pivots} pivots")
    return LpOutcome(LpStatus.OPTIMAL, optimum=optimum, solution=point, pivots=tab.pivots)


def _recover(cols: List[_Column], std_x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(col.offset + sum((s * std_x[k] for k, s in col.terms), ZERO) for col in cols)


def feasible(prob: LinearProgram) -> bool:
    """True iff the program has a feasible point"""
    zero_obj = LinearProgram(
        objective=(ZERO,) * prob.n_vars,
        constraints=prob.constraints,
        lower=prob.lower,
        upper=prob.upper,
    )
    return lp_solve(zero_obj).status is LpStatus.OPTIMAL
