import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from reflecto.environment_manager import get_env_manager, reload_settings
from reflecto.network import Discipline, NetworkSpec, reentrant_spec
from reflecto.rational import RatMatrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FBFS_R = RatMatrix.from_rows([[1, 0, 0], [-3, 1, 0], [3, -2, 1]])
FBFS_Q = RatMatrix.from_rows([[1, 0, 0], [3, 1, 0], [3, 2, 1]])
LBFS_Q = RatMatrix.from_rows([[3, 0, 0], [3, 3, 1], [3, 3, 3]])
LBFS_R = RatMatrix.from_rows([["1/3", 0, 0], ["-1/3", "1/2", "-1/6"], [0, "-1/2", "1/2"]])

EXAMPLE_ROUTE = (1, 1, 2, 3, 2, 3, 3)
EXAMPLE_MEANS = (2, 1, 2, 1, 1, 1, 1)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch, tmp_path):
    """Every test starts from default settings, untouched by a developer's .env"""
    for name in ("DIM_CAP", "SAMPLES", "SEED", "EPSILON", "AUX_BOUNDED", "LOG_LEVEL"):
        monkeypatch.delenv(f"REFLECTO_{name}", raising=False)
    monkeypatch.setenv("REFLECTO_ENV_FILE", str(tmp_path / "missing.env"))
    reload_settings()
    yield
    # the environment may still hold a value a test made invalid
    get_env_manager.cache_clear()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def fbfs_spec() -> NetworkSpec:
    return reentrant_spec(EXAMPLE_ROUTE, EXAMPLE_MEANS, Fraction(1, 3), Discipline.FBFS)


@pytest.fixture
def lbfs_spec() -> NetworkSpec:
    return reentrant_spec(EXAMPLE_ROUTE, EXAMPLE_MEANS, Fraction(1, 3), Discipline.LBFS)


@pytest.fixture
def singular_q_spec() -> NetworkSpec:
    # low classes 2 and 4 feed the high class of the other station
    routing = RatMatrix.from_function(4, 4, lambda k, c: int((k, c) in ((1, 2), (3, 0))))
    return NetworkSpec(
        n_classes=4,
        n_stations=2,
        station_of_class=(0, 0, 1, 1),
        routing=routing,
        service_means=(Fraction(1),) * 4,
        arrival_rates=(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2)),
        priority=(1, 2, 3, 4),
    )


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def make_random_spec(rng: random.Random, max_classes: int = 10, stations=None) -> NetworkSpec:
    """Valid spec: every routing row sums to at most 7/8, so the network is transient"""
    K = rng.randint(1 if stations is None else stations, max_classes)
    d = stations if stations is not None else rng.randint(1, K)
    station_of_class = list(range(d)) + [rng.randrange(d) for _ in range(K - d)]
    rng.shuffle(station_of_class)
    priority = list(range(1, K + 1))
    rng.shuffle(priority)

    rows = []
    for _ in range(K):
        row = [Fraction(0)] * K
        budget = 7
        for _ in range(rng.randint(0, 2)):
            share = rng.randint(0, budget)
            row[rng.randrange(K)] += Fraction(share, 8)
            budget -= share
        rows.append(row)
    return NetworkSpec(
        n_classes=K,
        n_stations=d,
        station_of_class=tuple(station_of_class),
        routing=RatMatrix.from_rows(rows),
        service_means=tuple(Fraction(rng.randint(1, 16), rng.randint(1, 4)) for _ in range(K)),
        arrival_rates=tuple(Fraction(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(K)),
        priority=tuple(priority),
    )


def make_random_route(rng: random.Random, max_classes: int = 8, max_stations: int = 4):
    d = rng.randint(1, max_stations)
    K = rng.randint(d, max_classes)
    route = list(range(1, d + 1)) + [rng.randint(1, d) for _ in range(K - d)]
    rng.shuffle(route)
    means = [Fraction(rng.randint(1, 16), 4) for _ in range(K)]
    return route, means


def make_random_m_matrix(rng: random.Random, max_dim: int = 4, zero_share: float = 0.5) -> RatMatrix:
    """
    Nonpositive off-diagonal entries and a strictly dominant positive diagonal: an M-matrix

    Each off-diagonal entry is zero with probability zero_share, so reducible,
    triangular and block-diagonal shapes all turn up.
    """
    d = rng.randint(1, max_dim)
    off = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            if i != j and rng.random() >= zero_share:
                off[i][j] = Fraction(-rng.randint(1, 3), rng.randint(1, 3))
    for i in range(d):
        off[i][i] = -sum(off[i], Fraction(0)) + rng.randint(1, 4)
    return RatMatrix.from_rows(off)


def random_b(rng: random.Random, d: int):
    return tuple(Fraction(rng.randint(1, 16), rng.randint(1, 16)) for _ in range(d))


def to_sympy(M: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(v.numerator, v.denominator) for v in M.entries])


def from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))
