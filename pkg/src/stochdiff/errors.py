"""
Exception hierarchy for stochdiff

Every failure raised by the library derives from StochdiffError, and each
subclass also derives from the built-in exception it refines so callers can
catch either.
"""

from __future__ import annotations

from pathlib import Path


class StochdiffError(Exception):
    """Base class for all stochdiff errors"""


class GridError(StochdiffError, ValueError):
    """Invalid grid, incompatible grids, or a malformed field"""


class QuadratureError(StochdiffError, ValueError):
    """Quadrature produced a non-finite value or failed to converge"""


class FluxConstructionError(StochdiffError, ValueError):
    """A flux model or numerical flux violates its structural assumptions"""


class StabilityViolationError(StochdiffError, ArithmeticError):
    """An explicit update left the admissible state interval"""

    def __init__(self, cell: int, value: float, bounds: tuple[float, float]) -> None:
        self.cell = cell
        self.value = value
        self.bounds = bounds
        super().__init__(
            f"Cell {cell} reached {value:.6g} outside [{bounds[0]:.6g}, {bounds[1]:.6g}]; time step violates CFL"
        )


class SingularMatrixError(StochdiffError, ArithmeticError):
    """Zero pivot in the cyclic tridiagonal solve"""


class NewtonConvergenceError(StochdiffError, ArithmeticError):
    """Newton iteration hit its iteration cap above tolerance"""

    def __init__(self, residual: float, iterations: int, tolerance: float) -> None:
        self.residual = residual
        self.iterations = iterations
        self.tolerance = tolerance
        super().__init__(
            f"Newton iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e} > tolerance {tolerance:.3e})"
        )


class SampleFailureError(StochdiffError, RuntimeError):
    """A single (level, index) sample run failed inside an estimator"""

    def __init__(self, level: int, index: int, reason: str) -> None:
        self.level = level
        self.index = index
        super().__init__(f"Sample (level={level}, index={index}) failed: {reason}")


class ConfigError(StochdiffError, ValueError):
    """Experiment configuration could not be parsed or validated"""

    def __init__(self, message: str, path: Path | None = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")
