"""Exception hierarchy shared by the library and the command line.

Input errors map to exit code 1, internal inconsistencies to exit code 2.
"""

from typing import Optional


class ReflectoError(Exception):
    """Base class for every error raised by reflecto"""


class InputError(ReflectoError, ValueError):
    """Bad input: malformed numbers, wrong shapes, invalid specs"""


class RationalParseError(InputError):
    pass


class DimensionError(InputError):
    pass


class DimensionCapError(InputError):
    def __init__(self, dimension: int, cap: int):
        super().__init__(
            f"dimension {dimension} exceeds the principal-submatrix enumeration cap {cap} "
            f"(set REFLECTO_DIM_CAP to raise it)"
        )
        self.dimension = dimension
        self.cap = cap


class SingularMatrixError(InputError):
    pass


class InvalidSpecError(InputError):
    def __init__(self, report):
        problems = "; ".join(f"{v.location}: {v.message}" for v in report.violations)
        super().__init__(f"invalid network spec: {problems}")
        self.report = report


class NotCompletelySError(InputError):
    def __init__(self, failing_subset: Optional[tuple] = None):
        detail = ""
        if failing_subset is not None:
            detail = " (principal submatrix {" + ",".join(str(i + 1) for i in failing_subset) + "} is not an S-matrix)"
        super().__init__(f"matrix is not completely-S{detail}; tightness is not defined")
        self.failing_subset = failing_subset


class MissingVariableError(InputError):
    def __init__(self, key: str):
        super().__init__(f"assignment is missing variable {key}")
        self.key = key


class QSingularError(ReflectoError):
    """Q is singular, so A_H is singular and the reflection matrix is undefined"""


class InconsistencyError(ReflectoError):
    """An internal invariant failed; this is a bug, not bad input"""
