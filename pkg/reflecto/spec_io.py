"""JSON file formats: network specs, matrix files and witness tables.

Rationals travel as strings ("3", "-1/2"); floats are rejected on read.
Station and class numbers are 1-based in files and 0-based in memory.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, RootModel, field_validator

from reflecto.errors import InputError
from reflecto.network import NetworkSpec
from reflecto.rational import RatMatrix, format_rat, rat_parse
from reflecto.tightness import Assignment, table_to_assignment

logger = logging.getLogger(__name__)


def _check_rational(value: str) -> str:
    # raises RationalParseError, a ValueError, which pydantic turns into a validation error
    rat_parse(value)
    return value


class NetworkSpecDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    classes: int = Field(ge=1)
    stations: int = Field(ge=1)
    station_of_class: List[int]
    priority: List[int]
    service_means: List[str]
    arrival_rates: List[str]
    routing: List[List[str]]

    @field_validator("service_means", "arrival_rates")
    @classmethod
    def _rational_vector(cls, values: List[str]) -> List[str]:
        return [_check_rational(v) for v in values]

    @field_validator("routing")
    @classmethod
    def _rational_rows(cls, rows: List[List[str]]) -> List[List[str]]:
        return [[_check_rational(v) for v in row] for row in rows]

    def to_spec(self) -> NetworkSpec:
        """Build the in-memory spec; structural checks are left to validate_spec"""
        return NetworkSpec(
            n_classes=self.classes,
            n_stations=self.stations,
            station_of_class=tuple(s - 1 for s in self.station_of_class),
            routing=RatMatrix.from_rows(self.routing),
            service_means=tuple(rat_parse(v) for v in self.service_means),
            arrival_rates=tuple(rat_parse(v) for v in self.arrival_rates),
            priority=tuple(self.priority),
        )

    @classmethod
    def from_spec(cls, spec: NetworkSpec) -> "NetworkSpecDocument":
        return cls(
            classes=spec.n_classes,
            stations=spec.n_stations,
            station_of_class=[s + 1 for s in spec.station_of_class],
            priority=list(spec.priority),
            service_means=[format_rat(v) for v in spec.service_means],
            arrival_rates=[format_rat(v) for v in spec.arrival_rates],
            routing=spec.routing.to_strings(),
        )


class MatrixFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: List[List[str]]
    b: Optional[List[str]] = None

    @field_validator("matrix")
    @classmethod
    def _square(cls, rows: List[List[str]]) -> List[List[str]]:
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("matrix must be a nonempty square array")
        return [[_check_rational(v) for v in row] for row in rows]

    @field_validator("b")
    @classmethod
    def _positive(cls, values: Optional[List[str]]) -> Optional[List[str]]:
        if values is None:
            return None
        for v in values:
            if rat_parse(v) <= 0:
                raise ValueError(f"b entry {v} is not positive")
        return values

    def to_matrix(self) -> RatMatrix:
        M = RatMatrix.from_rows(self.matrix)
        if self.b is not None and len(self.b) != M.rows:
            raise InputError(f"b has {len(self.b)} entries for a {M.rows}x{M.rows} matrix")
        return M

    def b_vector(self):
        return None if self.b is None else tuple(rat_parse(v) for v in self.b)


class WitnessTable(RootModel[Dict[str, str]]):
    pass


class WitnessFile(BaseModel):
    """{"variables": {key: rat}}; a bare {key: rat} object is accepted too"""

    model_config = ConfigDict(extra="forbid")

    variables: Dict[str, str]

    @field_validator("variables")
    @classmethod
    def _rationals(cls, table: Dict[str, str]) -> Dict[str, str]:
        return {k: _check_rational(v) for k, v in table.items()}

    def to_assignment(self, d: int) -> Assignment:
        return table_to_assignment(self.variables, d)


def _read_json(path: Union[str, Path]):
    path = Path(path)
    logger.debug(f"reading {path}")
    with path.open(encoding="utf-8") as f:
        return json.load(f)


def load_spec(path: Union[str, Path]) -> NetworkSpec:
    return NetworkSpecDocument.model_validate(_read_json(path)).to_spec()


def load_matrix_file(path: Union[str, Path]) -> MatrixFile:
    return MatrixFile.model_validate(_read_json(path))


def load_witness(path: Union[str, Path]) -> WitnessFile:
    data = _read_json(path)
    if isinstance(data, dict) and "variables" not in data:
        data = {"variables": WitnessTable.model_validate(data).root}
    return WitnessFile.model_validate(data)


def spec_to_json(spec: NetworkSpec) -> str:
    return NetworkSpecDocument.from_spec(spec).model_dump_json(indent=2)


def dump_spec(spec: NetworkSpec, path: Union[str, Path]):
    Path(path).write_text(spec_to_json(spec) + "\n", encoding="utf-8")
    logger.info(f"wrote network spec to {path}")
