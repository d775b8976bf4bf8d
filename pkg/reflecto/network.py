"""Multiclass networks under static buffer priority and their reflection matrix.

Classes and stations are 0-based inside this module; priority levels keep the
1..K values of the input. Every derivation runs on the relabeled network in
which the lowest-priority classes of the stations increase with the station
index.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from reflecto.errors import (
    InconsistencyError,
    InputError,
    InvalidSpecError,
    QSingularError,
    SingularMatrixError,
)
from reflecto.linalg import is_identity, mat_det, mat_inv, schur_complement, try_inv
from reflecto.rational import RatMatrix, format_rat, to_rational

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class NetworkSpec:
    n_classes: int
    n_stations: int
    station_of_class: Tuple[int, ...]
    routing: RatMatrix
    service_means: Tuple[Fraction, ...]
    arrival_rates: Tuple[Fraction, ...]
    priority: Tuple[int, ...]

    def classes_at(self, station: int) -> Tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.station_of_class) if s == station)

    @property
    def constituency(self) -> Tuple[Tuple[int, ...], ...]:
        """C_i for every station"""
        return tuple(self.classes_at(i) for i in range(self.n_stations))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_spec(spec: NetworkSpec) -> ValidationReport:
    """
    Check every structural assumption on a network, collecting all problems

    Args:
        spec: the network

    Returns:
        ValidationReport: empty when the spec is usable
    """
    found: List[Violation] = []

    def bad(location: str, message: str):
        found.append(Violation(location, message))

    K, d = spec.n_classes, spec.n_stations
    if K < 1:
        bad("classes", f"need at least one class, got {K}")
    if not 1 <= d <= max(K, 1):
        bad("stations", f"need 1 <= stations <= classes, got {d} stations for {K} classes")

    if len(spec.station_of_class) != K:
        bad("station_of_class", f"has {len(spec.station_of_class)} entries for {K} classes")
    for k, s in enumerate(spec.station_of_class):
        if not 0 <= s < d:
            bad(f"station_of_class[{k + 1}]", f"station {s + 1} outside 1..{d}")
    for i in range(d):
        if i not in spec.station_of_class:
            bad(f"station {i + 1}", "has no classes")

    if sorted(spec.priority) != list(range(1, K + 1)):
        bad("priority", f"must be a permutation of 1..{K}")

    for name, values, strict in (("service_means", spec.service_means, True), ("arrival_rates", spec.arrival_rates, False)):
        if len(values) != K:
            bad(name, f"has {len(values)} entries for {K} classes")
        for k, v in enumerate(values):
            if (strict and v <= 0) or (not strict and v < 0):
                bad(f"{name}[{k + 1}]", f"{format_rat(v)} must be {'positive' if strict else 'nonnegative'}")

    P = spec.routing
    if P.shape != (K, K):
        bad("routing", f"is {P.rows}x{P.cols}, expected {K}x{K}")
    else:
        for k in range(K):
            row = P.row(k)
            for j, v in enumerate(row):
                if v < 0:
                    bad(f"routing[{k + 1}][{j + 1}]", f"negative probability {format_rat(v)}")
            total = sum(row, ZERO)
            if total > 1:
                bad(f"routing[{k + 1}]", f"row sum {format_rat(total)} exceeds 1")
        W = try_inv(RatMatrix.identity(K) - P.transpose())
        if W is None:
            bad("routing", "I - P is singular (customers never leave)")
        elif any(v < 0 for v in W.entries):
            bad("routing", "(I - P')^-1 has a negative entry (not a transient routing)")

    return ValidationReport(tuple(found))


def require_valid(spec: NetworkSpec) -> NetworkSpec:
    report = validate_spec(spec)
    if not report.valid:
        raise InvalidSpecError(report)
    return spec


# ---------------------------------------------------------------------------
# priorities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrioritySets:
    H: Dict[int, FrozenSet[int]]
    k_plus: Dict[int, int]
    lowest: Tuple[int, ...]
    L_set: FrozenSet[int]
    H_set: FrozenSet[int]

    def H_plus(self, k: int) -> FrozenSet[int]:
        return self.H[k] - {k}


def priority_sets(spec: NetworkSpec) -> PrioritySets:
    """
    H(k), k+, ℓ(i) and the low/high class split

    k+ is the member of H₊(k) with the largest priority number, the next
    class up the priority chain at k's station.
    """
    p = spec.priority
    H: Dict[int, FrozenSet[int]] = {}
    k_plus: Dict[int, int] = {}
    for k in range(spec.n_classes):
        station_classes = spec.classes_at(spec.station_of_class[k])
        H[k] = frozenset(c for c in station_classes if p[c] <= p[k])
        above = H[k] - {k}
        if above:
            k_plus[k] = max(above, key=lambda c: p[c])
    lowest = tuple(max(spec.classes_at(i), key=lambda c: p[c]) for i in range(spec.n_stations))
    L_set = frozenset(lowest)
    H_set = frozenset(range(spec.n_classes)) - L_set
    return PrioritySets(H=H, k_plus=k_plus, lowest=lowest, L_set=L_set, H_set=H_set)


def relabel_stations(spec: NetworkSpec) -> Tuple[NetworkSpec, Tuple[int, ...]]:
    """
    Renumber stations so that ℓ(1) < ℓ(2) < ... < ℓ(d)

    Returns:
        (relabeled spec, permutation) with permutation[new] = old station
    """
    lowest = priority_sets(spec).lowest
    permutation = tuple(sorted(range(spec.n_stations), key=lambda i: lowest[i]))
    new_of_old = {old: new for new, old in enumerate(permutation)}
    relabeled = replace(spec, station_of_class=tuple(new_of_old[s] for s in spec.station_of_class))
    if permutation != tuple(range(spec.n_stations)):
        logger.info(f"stations relabeled: new order {[i + 1 for i in permutation]}")
    return relabeled, permutation


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def build_W(spec: NetworkSpec) -> RatMatrix:
    """W = (I - P')⁻¹"""
    return mat_inv(RatMatrix.identity(spec.n_classes) - spec.routing.transpose())


def build_B(spec: NetworkSpec, sets: Optional[PrioritySets] = None) -> RatMatrix:
    sets = sets or priority_sets(spec)
    return RatMatrix.from_function(
        spec.n_classes, spec.n_classes, lambda k, c: int(sets.k_plus.get(k) == c)
    )


def build_F(spec: NetworkSpec, sets: Optional[PrioritySets] = None) -> RatMatrix:
    """F[k][k'] = 1 iff k' ∈ H(k); equals (I - B)⁻¹"""
    sets = sets or priority_sets(spec)
    return RatMatrix.from_function(spec.n_classes, spec.n_classes, lambda k, c: int(c in sets.H[k]))


def build_A(spec: NetworkSpec, sets: Optional[PrioritySets] = None) -> RatMatrix:
    """A = (I - P')·M⁻¹·(I - B)"""
    K = spec.n_classes
    I = RatMatrix.identity(K)
    M_inv = RatMatrix.diag([ONE / m for m in spec.service_means])
    return (I - spec.routing.transpose()) @ M_inv @ (I - build_B(spec, sets))


def build_A_inverse(spec: NetworkSpec, sets: Optional[PrioritySets] = None, W: Optional[RatMatrix] = None) -> RatMatrix:
    """Closed form [A⁻¹][k'][k''] = Σ_{k ∈ H(k')} m_k w_{k,k''}, no inversion"""
    sets = sets or priority_sets(spec)
    W = W if W is not None else build_W(spec)
    m = spec.service_means

    def entry(k1: int, k2: int) -> Fraction:
        return sum((m[k] * W[k, k2] for k in sets.H[k1]), ZERO)

    return RatMatrix.from_function(spec.n_classes, spec.n_classes, entry)


def build_Q(spec: NetworkSpec, sets: Optional[PrioritySets] = None, W: Optional[RatMatrix] = None) -> RatMatrix:
    """Q[i][j] = Σ_{k ∈ C_i} m_k w_{k,ℓ(j)}"""
    sets = sets or priority_sets(spec)
    W = W if W is not None else build_W(spec)
    m = spec.service_means
    C = spec.constituency
    lowest = sets.lowest

    def entry(i: int, j: int) -> Fraction:
        return sum((m[k] * W[k, lowest[j]] for k in C[i]), ZERO)

    return RatMatrix.from_function(spec.n_stations, spec.n_stations, entry)


def schur_reflection(spec: NetworkSpec, sets: Optional[PrioritySets] = None) -> RatMatrix:
    """
    R through A_L - A_LH A_H⁻¹ A_HL, read back at (ℓ(i), ℓ(j))

    Raises:
        SingularMatrixError: when A_H is singular
    """
    sets = sets or priority_sets(spec)
    A = build_A(spec, sets)
    # L in station order makes R[i][j] = R̃[ℓ(i)][ℓ(j)] a plain block read
    return schur_complement(A, list(sets.lowest), sorted(sets.H_set))


@dataclass(frozen=True)
class DerivedMatrices:
    spec: NetworkSpec
    relabel: Tuple[int, ...]
    sets: PrioritySets
    W: RatMatrix
    B: RatMatrix
    F: RatMatrix
    A: RatMatrix
    A_inv: RatMatrix
    Q: RatMatrix
    R: Optional[RatMatrix] = None

    @property
    def r_defined(self) -> bool:
        return self.R is not None

    def R_original_order(self) -> Optional[RatMatrix]:
        """R indexed by the input's station numbers"""
        if self.R is None:
            return None
        return reorder_to_original(self.R, self.relabel)


def reorder_to_original(M: RatMatrix, relabel: Sequence[int]) -> RatMatrix:
    d = len(relabel)
    new_of_old = {old: new for new, old in enumerate(relabel)}
    return RatMatrix.from_function(d, d, lambda a, b: M[new_of_old[a], new_of_old[b]])


def reflection_matrix(spec: NetworkSpec) -> RatMatrix:
    """
    R = Q⁻¹ on the relabeled network, cross-checked against the Schur path

    Raises:
        QSingularError: Q (equivalently A_H) is singular, R is undefined
        InconsistencyError: the two paths disagree
    """
    derived = derive(spec)
    if derived.R is None:
        raise QSingularError("Q is singular, so A_H is singular and R is undefined")
    return derived.R


def derive(spec: NetworkSpec) -> DerivedMatrices:
    """
    Validate, relabel and derive W, B, F, A, A⁻¹, Q and (when defined) R

    Every algebraic identity linking them is checked exactly; a failure is an
    InconsistencyError.
    """
    require_valid(spec)
    relabeled, permutation = relabel_stations(spec)
    sets = priority_sets(relabeled)
    K = relabeled.n_classes
    I = RatMatrix.identity(K)

    W = build_W(relabeled)
    B = build_B(relabeled, sets)
    F = build_F(relabeled, sets)
    if not is_identity(F @ (I - B)):
        raise InconsistencyError("F(I - B) != I")
    A = build_A(relabeled, sets)
    A_inv = build_A_inverse(relabeled, sets, W)
    if not is_identity(A @ A_inv):
        raise InconsistencyError("closed-form A⁻¹ is not the inverse of A")
    Q = build_Q(relabeled, sets, W)
    lowest = sets.lowest
    for i in range(relabeled.n_stations):
        for j in range(relabeled.n_stations):
            if A_inv[lowest[i], lowest[j]] != Q[i, j]:
                raise InconsistencyError(f"A⁻¹ at (ℓ({i + 1}), ℓ({j + 1})) differs from Q")

    R = try_inv(Q)
    try:
        schur = schur_reflection(relabeled, sets)
    except SingularMatrixError:
        schur = None
    if R is None:
        if schur is not None:
            raise InconsistencyError("Q is singular but A_H is invertible")
        logger.warning("Q is singular: the reflection matrix is undefined")
    else:
        if schur is None:
            raise InconsistencyError("Q is invertible but A_H is singular")
        if schur != R:
            logger.error(f"Schur path {schur} != Q⁻¹ path {R}")
            raise InconsistencyError("Schur complement and Q⁻¹ give different reflection matrices")
        if not is_identity(R @ Q):
            raise InconsistencyError("R·Q != I")

    return DerivedMatrices(
        spec=relabeled, relabel=permutation, sets=sets,
        W=W, B=B, F=F, A=A, A_inv=A_inv, Q=Q, R=R,
    )


def reflection_matrix_original_order(spec: NetworkSpec) -> RatMatrix:
    """R with rows and columns in the input's station numbering"""
    derived = derive(spec)
    if derived.R is None:
        raise QSingularError("Q is singular, so A_H is singular and R is undefined")
    return derived.R_original_order()


def two_station_m_matrix(spec: NetworkSpec) -> bool:
    """For two stations, det Q > 0 makes R = Q⁻¹ an M-matrix"""
    relabeled, _ = relabel_stations(require_valid(spec))
    return relabeled.n_stations == 2 and mat_det(build_Q(relabeled)) > 0


# ---------------------------------------------------------------------------
# traffic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrafficReport:
    alpha: Tuple[Fraction, ...]
    rho: Tuple[Fraction, ...]
    heavy_traffic: bool


def traffic(spec: NetworkSpec) -> TrafficReport:
    """α = Wλ and ρ_i = Σ_{k ∈ C_i} α_k m_k; heavy traffic iff every ρ_i = 1 exactly"""
    require_valid(spec)
    alpha = build_W(spec).apply(spec.arrival_rates)
    rho = tuple(
        sum((alpha[k] * spec.service_means[k] for k in C), ZERO)
        for C in spec.constituency
    )
    if any(a < lam for a, lam in zip(alpha, spec.arrival_rates)):
        raise InconsistencyError("effective arrival rate below the external rate")
    return TrafficReport(alpha=alpha, rho=rho, heavy_traffic=all(r == 1 for r in rho))


# ---------------------------------------------------------------------------
# reentrant lines
# ---------------------------------------------------------------------------

class Discipline(str, Enum):
    FBFS = "fbfs"
    LBFS = "lbfs"


def reentrant_spec(
    route: Sequence[int],
    means: Sequence,
    arrival_rate,
    discipline: Discipline,
) -> NetworkSpec:
    """
    Reentrant line: class k is the k-th visit of the single route

    Args:
        route: 1-based station of each visit; stations 1..max(route) must all appear
        means: positive mean service time per class
        arrival_rate: external rate into class 1
        discipline: FBFS (earlier buffer first) or LBFS (later buffer first)
    """
    route = list(route)
    K = len(route)
    if K < 1:
        raise InputError("route must visit at least one station")
    if any(s < 1 for s in route):
        raise InputError(f"route station numbers start at 1, got {route}")
    d = max(route)
    missing = sorted(set(range(1, d + 1)) - set(route))
    if missing:
        raise InputError(f"route skips station(s) {missing}")
    means = tuple(to_rational(m) for m in means)
    if len(means) != K:
        raise InputError(f"{len(means)} service means for a route of {K} visits")
    if any(m <= 0 for m in means):
        raise InputError("service means must be positive")
    lam = to_rational(arrival_rate)
    if lam < 0:
        raise InputError("arrival rate must be nonnegative")
    discipline = Discipline(discipline)

    routing = RatMatrix.from_function(K, K, lambda k, c: int(c == k + 1))
    if discipline is Discipline.FBFS:
        priority = tuple(range(1, K + 1))
    else:
        priority = tuple(K + 1 - k for k in range(1, K + 1))
    return NetworkSpec(
        n_classes=K,
        n_stations=d,
        station_of_class=tuple(s - 1 for s in route),
        routing=routing,
        service_means=means,
        arrival_rates=(lam,) + (ZERO,) * (K - 1),
        priority=priority,
    )
