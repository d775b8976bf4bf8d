from fractions import Fraction

import pytest

from reflecto.errors import DimensionError, RationalParseError
from reflecto.rational import RatMatrix, format_rat, parse_csv_vector, rat_parse, to_rational


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3/6", Fraction(1, 2)),
        ("-4/2", Fraction(-2)),
        ("0/5", Fraction(0)),
        ("7", Fraction(7)),
        ("-0", Fraction(0)),
    ],
)
def test_rat_parse_canonicalizes(text, expected):
    assert rat_parse(text) == expected


@pytest.mark.parametrize(
    "text",
    ["1/0", "1.5", "abc", "", "1/-2", "--1", "1/2/3", " 1", "1 ", "1/2\n", "1 / 2", "\u0661", "\uff11/2"],
)
def test_rat_parse_rejects_malformed(text):
    with pytest.raises(RationalParseError):
        rat_parse(text)


def test_format_rat_is_canonical():
    assert format_rat(rat_parse("3/6")) == "1/2"
    assert format_rat(Fraction(-4, 2)) == "-2"
    assert format_rat(Fraction(0)) == "0"


def test_to_rational_refuses_floats_and_bools():
    with pytest.raises(RationalParseError):
        to_rational(0.5)
    with pytest.raises(RationalParseError):
        to_rational(True)
    assert to_rational("2/4") == Fraction(1, 2)


def test_parse_csv_vector():
    assert parse_csv_vector("1, 1/2,3") == (Fraction(1), Fraction(1, 2), Fraction(3))
    with pytest.raises(RationalParseError):
        parse_csv_vector("1,,2")


def test_matrix_algebra():
    A = RatMatrix.from_rows([[1, 2], [3, 4]])
    B = RatMatrix.from_rows([["1/2", 0], [0, "-1"]])
    assert (A @ B).to_strings() == [["1/2", "-2"], ["3/2", "-4"]]
    assert (A + B) - B == A
    assert A.transpose() == RatMatrix.from_rows([[1, 3], [2, 4]])
    assert A.scale_columns([2, 3]) == A @ RatMatrix.diag([2, 3])
    assert A.apply([Fraction(1), Fraction(1)]) == (Fraction(3), Fraction(7))
    assert (-A)[1, 0] == -3
    assert RatMatrix.identity(2) @ A == A


def test_permute_and_submatrix():
    M = RatMatrix.from_function(3, 3, lambda i, j: 3 * i + j)
    assert M.permute([2, 0, 1])[0, 0] == M[2, 2]
    assert M.submatrix([0, 2], [1]).to_lists() == [[Fraction(1)], [Fraction(7)]]


def test_shape_errors():
    with pytest.raises(DimensionError):
        RatMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionError):
        RatMatrix.identity(2) @ RatMatrix.identity(3)
    with pytest.raises(DimensionError):
        RatMatrix.identity(2) + RatMatrix.identity(3)
