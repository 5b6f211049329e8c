"""
Uniform periodic 1D grids and cell-averaged solution fields
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from stochdiff.errors import GridError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform mesh of [x_min, x_max] with periodic boundary treatment.

    Cell j covers [x_min + j*dx, x_min + (j+1)*dx).
    """

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self) -> None:
        if isinstance(self.n_cells, bool) or not isinstance(self.n_cells, int | np.integer):
            raise GridError(f"n_cells must be an integer, got {self.n_cells!r}")
        if self.n_cells < 2:
            raise GridError(f"n_cells must be at least 2, got {self.n_cells}")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise GridError("Grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise GridError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        object.__setattr__(self, "n_cells", int(self.n_cells))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @classmethod
    def from_dx(cls, x_min: float, x_max: float, dx: float) -> GridSpec:
        """Create a grid from a target cell size that must divide the domain"""
        length = x_max - x_min
        n_cells = round(length / dx)
        if n_cells < 1 or abs(n_cells * dx - length) > 1e-9 * length:
            raise GridError(f"Cell size {dx} does not divide the domain [{x_min}, {x_max}]")
        return cls(x_min, x_max, n_cells)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def edges(self) -> FloatArray:
        """Cell interfaces x_{j-1/2}, n_cells + 1 of them"""
        return self.x_min + self.dx * np.arange(self.n_cells + 1, dtype=np.float64)

    @property
    def centers(self) -> FloatArray:
        return self.x_min + self.dx * (np.arange(self.n_cells, dtype=np.float64) + 0.5)

    def same_domain(self, other: GridSpec) -> bool:
        """Whether both grids mesh the same physical interval"""
        scale = max(abs(self.x_min), abs(self.x_max), self.length)
        return abs(self.x_min - other.x_min) <= 1e-12 * scale and abs(self.x_max - other.x_max) <= 1e-12 * scale

    def refinement_ratio(self, fine: GridSpec) -> int:
        """Integer number of fine cells per cell of this grid"""
        if not self.same_domain(fine):
            raise GridError(f"Grids mesh different domains: {self} vs {fine}")
        if fine.n_cells % self.n_cells != 0:
            raise GridError(f"Grid with {fine.n_cells} cells does not nest a grid with {self.n_cells} cells")
        return fine.n_cells // self.n_cells

    def refine(self, factor: int) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, self.n_cells * factor)


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Cell averages u_j at a given time, one value per cell of grid"""

    grid: GridSpec
    values: FloatArray
    time: float = 0.0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.grid.n_cells:
            raise GridError(f"Field has shape {values.shape}, grid expects ({self.grid.n_cells},)")
        if not np.all(np.isfinite(values)):
            raise GridError("Field values must be finite")
        if not math.isfinite(self.time) or self.time < 0:
            raise GridError(f"Field time must be a nonnegative real, got {self.time}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def constant(cls, grid: GridSpec, value: float, time: float = 0.0) -> SolutionField:
        return cls(grid, np.full(grid.n_cells, value, dtype=np.float64), time)

    @classmethod
    def zeros(cls, grid: GridSpec, time: float = 0.0) -> SolutionField:
        return cls.constant(grid, 0.0, time)

    def with_values(self, values: npt.ArrayLike, time: float | None = None) -> SolutionField:
        """Copy of this field on the same grid with new values"""
        return SolutionField(self.grid, np.asarray(values, dtype=np.float64), self.time if time is None else time)

    def __len__(self) -> int:
        return self.grid.n_cells

    def __repr__(self) -> str:
        low, high = self.values.min(), self.values.max()
        return f"SolutionField(n_cells={self.grid.n_cells}, time={self.time}, range=[{low:.4g}, {high:.4g}])"
