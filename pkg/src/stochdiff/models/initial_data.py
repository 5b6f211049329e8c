"""
Deterministic initial data of the saturation experiments
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from stochdiff.core import GridSpec, SolutionField, cell_average

FloatArray = npt.NDArray[np.float64]
InitialDataKind = Literal["riemann_u02", "sine"]


@dataclass(frozen=True, eq=False)
class InitialData:
    """
    Initial datum u0 on one period [x_min, x_max].

    breakpoints lists the jumps of u0 so cell averages integrate it exactly;
    state_range is the admissible interval [M₋, M₊] the max principle keeps
    the solution in.
    """

    name: str
    func: Callable[[FloatArray], npt.ArrayLike]
    x_min: float
    x_max: float
    state_range: tuple[float, float]
    breakpoints: tuple[float, ...] = ()

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.func(x), dtype=np.float64), x.shape)

    def grid(self, n_cells: int) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, n_cells)

    def grid_for_dx(self, dx: float) -> GridSpec:
        return GridSpec.from_dx(self.x_min, self.x_max, dx)

    def project(self, grid: GridSpec) -> SolutionField:
        """Cell averages on grid"""
        return cell_average(self.func, grid, self.breakpoints)


def _riemann_u02(x: FloatArray) -> FloatArray:
    # periodic extension of the step on [0, 2)
    y = np.mod(x, 2.0)
    return np.where((y >= 0.1) & (y < 1.0), 0.8, 0.1)


def _sine(x: FloatArray) -> FloatArray:
    return np.sin(4.0 * np.pi * x)


def initial_data(kind: InitialDataKind) -> InitialData:
    """
    riemann_u02: 0.8 on [0.1, 1), 0.1 elsewhere on [0, 2]
    sine: sin(4πx) on [0, 0.5]
    """
    if kind == "riemann_u02":
        return InitialData(
            name="riemann_u02",
            func=_riemann_u02,
            x_min=0.0,
            x_max=2.0,
            state_range=(0.1, 0.8),
            breakpoints=(0.1, 1.0),
        )
    if kind == "sine":
        return InitialData(name="sine", func=_sine, x_min=0.0, x_max=0.5, state_range=(-1.0, 1.0))
    raise ValueError(f"Unknown initial data kind: {kind!r}")
