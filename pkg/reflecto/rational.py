"""Exact rational scalars and dense rational matrices.

Scalars are ``fractions.Fraction`` values, which are always kept in lowest
terms with a positive denominator. Matrices are immutable row-major grids.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple, Union

from reflecto.errors import DimensionError, RationalParseError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_TEXT = re.compile(r"(-?[0-9]+)(?:/([0-9]+))?")


def rat_parse(text: str) -> Fraction:
    """
    Parse "p", "-p" or "p/q" into a canonical Fraction

    Args:
        text: integer or quotient of integers, no whitespace or decimals

    Returns:
        Fraction: the value in lowest terms
    """
    if not isinstance(text, str):
        raise RationalParseError(f"expected a rational string, got {type(text).__name__}")
    match = _RATIONAL_TEXT.fullmatch(text)
    if match is None:
        raise RationalParseError(f"malformed rational {text!r} (expected p, -p or p/q)")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise RationalParseError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rat(value: Fraction) -> str:
    return str(Fraction(value))


def to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, str):
        return rat_parse(value)
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        # floats never enter the exact pipeline
        raise RationalParseError(f"cannot use {value!r} as an exact rational")
    return Fraction(value)


def parse_csv_vector(text: str) -> Tuple[Fraction, ...]:
    """Parse "1,1/2,3" as used by the --b / --means flags"""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise RationalParseError(f"malformed rational list {text!r}")
    return tuple(rat_parse(p) for p in parts)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        for index, row in enumerate(rows):
            if len(row) != n_cols:
                raise DimensionError(f"row {index + 1} has {len(row)} entries, expected {n_cols}")
        return cls(n_rows, n_cols, tuple(to_rational(v) for row in rows for v in row))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[RationalLike]) -> "RatMatrix":
        n = len(values)
        vals = [to_rational(v) for v in values]
        return cls(n, n, tuple(vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)))

    @classmethod
    def from_function(cls, rows: int, cols: int, fn) -> "RatMatrix":
        return cls(rows, cols, tuple(Fraction(fn(i, j)) for i in range(rows) for j in range(cols)))

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index ({i},{j}) out of range for {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def iter_rows(self) -> Iterator[Tuple[Fraction, ...]]:
        for i in range(self.rows):
            yield self.row(i)

    def to_lists(self) -> List[List[Fraction]]:
        return [list(r) for r in self.iter_rows()]

    def to_strings(self) -> List[List[str]]:
        return [[format_rat(v) for v in r] for r in self.iter_rows()]

    def diagonal(self) -> Tuple[Fraction, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(
            len(row_idx), len(col_idx),
            tuple(self[i, j] for i in row_idx for j in col_idx),
        )

    # -- algebra ------------------------------------------------------------

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def _check_same_shape(self, other: "RatMatrix", op: str):
        if self.shape != other.shape:
            raise DimensionError(f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other, "add")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other, "subtract")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, factor: RationalLike) -> "RatMatrix":
        f = to_rational(factor)
        return RatMatrix(self.rows, self.cols, tuple(f * a for a in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for col in other_cols:
                out.append(sum((a * b for a, b in zip(r, col) if a and b), Fraction(0)))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """Matrix-vector product"""
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} does not fit {self.rows}x{self.cols}")
        return tuple(sum((a * v for a, v in zip(r, vector)), Fraction(0)) for r in self.iter_rows())

    def scale_columns(self, factors: Sequence[RationalLike]) -> "RatMatrix":
        """M·diag(factors)"""
        if len(factors) != self.cols:
            raise DimensionError(f"{len(factors)} column factors for {self.cols} columns")
        f = [to_rational(v) for v in factors]
        return RatMatrix.from_function(self.rows, self.cols, lambda i, j: self[i, j] * f[j])

    def permute(self, order: Sequence[int]) -> "RatMatrix":
        """Symmetric permutation: result[a][b] = self[order[a]][order[b]]"""
        return self.submatrix(order, order)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"
