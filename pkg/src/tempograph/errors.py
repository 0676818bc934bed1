"""Exception types shared across the package."""

from __future__ import annotations


class DataError(ValueError):
    """Malformed or inconsistent input data (bad line, missing id, ...)."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class MetricError(ValueError):
    """A metric is undefined on the given graph (empty graph, zero variance, ...)."""


class ConvergenceError(MetricError):
    """An iterative method hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")
