"""End-to-end checks on the worked examples and seeded random families."""

import json
import random
from fractions import Fraction

import pytest

from conftest import (
    EXAMPLE_MEANS,
    EXAMPLE_ROUTE,
    FBFS_Q,
    FBFS_R,
    LBFS_R,
    make_random_m_matrix,
    make_random_route,
    make_random_spec,
    random_b,
)
from reflecto.linalg import is_identity, mat_det, schur_complement
from reflecto.matrix_classes import Thm1Case, is_completely_s, is_m_matrix, thm1_classify, thm2_applicable
from reflecto.network import Discipline, build_A, derive, reentrant_spec, traffic, two_station_m_matrix
from reflecto.rational import RatMatrix
from reflecto.tightness import (
    DecisionStatus,
    ProofMethod,
    absorb_b,
    build_system,
    case_d_witness,
    check_tight_system,
    decide_tight_matrix,
    decoupled_sets,
    sample_b_vectors,
    table_to_assignment,
    verify_assignment,
)

ONES3 = (1, 1, 1)


def test_fbfs_example_reproduction():
    spec = reentrant_spec(EXAMPLE_ROUTE, EXAMPLE_MEANS, Fraction(1, 3), Discipline.FBFS)
    derived = derive(spec)
    assert derived.Q == FBFS_Q
    assert derived.R == FBFS_R
    load = traffic(spec)
    assert load.alpha == (Fraction(1, 3),) * 7
    assert load.rho == (1, 1, 1)
    assert load.heavy_traffic


@pytest.mark.parametrize("aux_bounded", [True, False])
def test_fbfs_matrix_regression(fixtures_dir, aux_bounded):
    table = json.loads((fixtures_dir / "fbfs_witness.json").read_text())["variables"]
    report = verify_assignment(build_system(FBFS_R, ONES3, aux_bounded), table_to_assignment(table, 3))
    assert report.is_nontrivial_witness

    for b in [ONES3] + sample_b_vectors(3, 20, seed=7):
        verdict = check_tight_system(FBFS_R, b, aux_bounded)
        # every solution has x{1} = x{2} = x{1,2} = 1; slack at {3} exists iff 3 b1 >= 2 b2
        assert verdict.tight == (3 * verdict.b[0] < 2 * verdict.b[1])
        if not verdict.tight:
            system = build_system(FBFS_R, b, aux_bounded)
            assert verify_assignment(system, verdict.witness).is_nontrivial_witness


def two_by_two_grid():
    values = (-2, -1, 0, 1, 2)
    for r11 in (1, 2):
        for r22 in (1, 2):
            for r12 in values:
                for r21 in values:
                    if r12 == 0 and r21 == 0:
                        continue
                    yield RatMatrix.from_rows([[r11, r12], [r21, r22]])


def test_two_by_two_classification_matches_the_lp():
    checked = 0
    for R in two_by_two_grid():
        case = thm1_classify(R)
        assert decoupled_sets(R) is None
        for b in [(1, 1), (1, 2), (3, 1)]:
            checked += 1
            if case is Thm1Case.E_NOT_CS:
                assert not is_completely_s(R)[0]
                continue
            assert check_tight_system(R, b).tight == case.is_tight
            if case is Thm1Case.D_CS_NOT_TIGHT:
                witness = case_d_witness(R, b, Fraction(1, 2))
                assert verify_assignment(build_system(R, b), witness).is_nontrivial_witness
    assert checked == 288


@pytest.mark.slow
def test_lbfs_lines_are_tight():
    rng = random.Random(41)
    for _ in range(100):
        route, means = make_random_route(rng)
        spec = reentrant_spec(route, means, Fraction(1), Discipline.LBFS)
        R = derive(spec).R
        assert R is not None
        assert thm2_applicable(R)
        d = R.rows
        for b in [(1,) * d] + [random_b(rng, d) for _ in range(3)]:
            assert check_tight_system(R, b).tight
            assert check_tight_system(R, b, aux_bounded=False).tight


def assert_decision_matches_lp(R, decision, rng):
    """A decision never contradicts the LP on the b it reports or, for proofs, on fresh b"""
    d = R.rows
    aux = decision.aux_bounded
    if decision.status is DecisionStatus.NOT_TIGHT:
        system = build_system(R, decision.b_witness, aux)
        assert verify_assignment(system, decision.witness).is_nontrivial_witness
        assert not check_tight_system(R, decision.b_witness, aux).tight
        assert not check_tight_system(R, decision.b_witness, not aux).tight
        return
    for b in decision.tested_b:
        assert check_tight_system(R, b, aux).tight
    if decision.status is DecisionStatus.TIGHT_PROVEN and decision.method is not ProofMethod.M_MATRIX:
        for b in [(1,) * d] + [random_b(rng, d) for _ in range(2)]:
            assert check_tight_system(R, b, aux).tight
            assert check_tight_system(R, b, not aux).tight


@pytest.mark.parametrize("aux_bounded", [True, False])
def test_sparse_m_matrix_decisions_match_the_lp(aux_bounded):
    rng = random.Random(17)
    reducible = RatMatrix.from_rows([[2, -1, 0], [-1, 2, 0], [0, 0, 1]])
    statuses = set()
    for R in [reducible] + [make_random_m_matrix(rng, max_dim=3) for _ in range(15)]:
        assert is_m_matrix(R)
        decision = decide_tight_matrix(R, sample_count=2, seed=rng.randrange(100), aux_bounded=aux_bounded)
        statuses.add(decision.status)
        assert_decision_matches_lp(R, decision, rng)
    assert DecisionStatus.NOT_TIGHT in statuses


@pytest.mark.slow
def test_m_matrix_decisions_match_the_lp():
    rng = random.Random(5)
    for _ in range(50):
        R = make_random_m_matrix(rng, zero_share=rng.choice([0.0, 0.3, 0.6]))
        assert is_m_matrix(R)
        decision = decide_tight_matrix(R, sample_count=3, seed=rng.randrange(100))
        assert_decision_matches_lp(R, decision, rng)


def test_algebraic_identities_on_random_specs():
    rng = random.Random(8)
    singular = 0
    for _ in range(100):
        spec = make_random_spec(rng)
        derived = derive(spec)
        s = derived.spec
        sets = derived.sets
        K = s.n_classes
        assert is_identity(derived.F @ (RatMatrix.identity(K) - derived.B))
        assert is_identity(derived.A @ derived.A_inv)
        for i, li in enumerate(sets.lowest):
            for j, lj in enumerate(sets.lowest):
                assert derived.A_inv[li, lj] == derived.Q[i, j]
        if mat_det(derived.Q) != 0:
            schur = schur_complement(build_A(s, sets), list(sets.lowest), sorted(sets.H_set))
            assert schur == derived.R
        else:
            singular += 1
            assert derived.R is None
    assert singular < 100


def test_two_station_corollary():
    rng = random.Random(13)
    found = 0
    while found < 50:
        spec = make_random_spec(rng, max_classes=6, stations=2)
        if not two_station_m_matrix(spec):
            continue
        found += 1
        R = derive(spec).R
        assert is_m_matrix(R)
        decision = decide_tight_matrix(R)
        if decoupled_sets(R) is None:
            assert decision.status is DecisionStatus.TIGHT_PROVEN
            assert decision.method is ProofMethod.THM1
        else:
            # diagonal R: no class of one station ever feeds the other's lowest class
            assert decision.status is DecisionStatus.NOT_TIGHT


@pytest.mark.parametrize(
    "R, b",
    [
        (FBFS_R, (1, 1, 1)),
        (FBFS_R, (2, 3, 1)),
        (FBFS_R, (1, 2, 1)),
        (LBFS_R, (1, 1, 1)),
        (RatMatrix.from_rows([[1, 1], [1, 1]]), (1, 1)),
        (RatMatrix.from_rows([[1, 1], [1, 1]]), (1, 3)),
    ],
)
def test_b_absorption_on_fixtures(R, b):
    d = R.rows
    assert check_tight_system(R, b).tight == check_tight_system(absorb_b(R, b), (1,) * d).tight
