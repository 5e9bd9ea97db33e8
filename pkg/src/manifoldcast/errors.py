"""Exception types shared across the package.

The CLI maps these onto its exit-code partition: input parsing -> 2,
configuration -> 3, numerical failures -> 4.
"""

from __future__ import annotations


class ManifoldcastError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(ManifoldcastError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(ManifoldcastError):
    """Input data could not be parsed (CLI exit code 2)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class ConfigError(ManifoldcastError):
    """Configuration is invalid (CLI exit code 3)."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class NumericalError(ManifoldcastError):
    """Base class for numerical failures (CLI exit code 4)."""


class DegenerateNeighborhoodError(NumericalError):
    """A point has too few neighbours to estimate a tangent space."""

    def __init__(self, point_index: int, found: int, needed: int, radius: float):
        self.point_index = point_index
        super().__init__(
            f"point {point_index}: {found} neighbour(s) within radius {radius:g}, "
            f"need at least {needed}"
        )


class SolverError(NumericalError):
    """A linear solve failed or did not meet the residual contract."""

    def __init__(self, message: str, condition_number: float | None = None):
        self.condition_number = condition_number
        if condition_number is not None:
            message = f"{message} (condition number ~{condition_number:.3e})"
        super().__init__(message)


class NumericalDivergenceError(NumericalError):
    """An iterative scheme produced non-finite values."""

    def __init__(self, iteration: int, what: str = "iterate"):
        self.iteration = iteration
        super().__init__(f"non-finite {what} at iteration {iteration}")
