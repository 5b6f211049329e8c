"""
Operations on cell-averaged fields: projection of initial data, norms over one
period, and transfer between nested grids
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

import numpy as np
import numpy.typing as npt

from stochdiff.errors import QuadratureError

from .grid import FloatArray, GridSpec, SolutionField
from .quadrature import DEFAULT_ORDER, gauss_legendre


def cell_average(
    u0: Callable[[FloatArray], npt.ArrayLike],
    grid: GridSpec,
    breakpoints: Iterable[float] = (),
    order: int = DEFAULT_ORDER,
) -> SolutionField:
    """
    Project u0 onto the grid by cell averaging.

    Each cell is integrated with composite Gauss–Legendre, one panel per
    segment between cell edges and the given breakpoints. Piecewise data whose
    jumps are listed in breakpoints is therefore integrated exactly.

    Args:
        u0: Vectorized initial-data function
        grid: Target grid
        breakpoints: Known discontinuities of u0
        order: Gauss–Legendre points per segment

    Raises:
        QuadratureError: if any cell integral is not finite
    """
    edges = grid.edges
    inner = np.array([bp for bp in breakpoints if grid.x_min < bp < grid.x_max], dtype=np.float64)
    points = np.unique(np.concatenate([edges, inner]))
    lo, hi = points[:-1], points[1:]
    segments = gauss_legendre(u0, lo, hi, order=order)
    cell = np.clip(np.searchsorted(edges, 0.5 * (lo + hi), side="right") - 1, 0, grid.n_cells - 1)
    totals = np.bincount(cell, weights=segments, minlength=grid.n_cells)
    values = totals / grid.dx
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise QuadratureError(f"Cell average of initial data is not finite in cell {bad}")
    return SolutionField(grid, values, 0.0)


def l1_norm(u: SolutionField) -> float:
    """Σ_j |u_j|·dx over one period"""
    return float(np.sum(np.abs(u.values)) * u.grid.dx)


def linf_norm(u: SolutionField) -> float:
    return float(np.max(np.abs(u.values)))


def bv_seminorm(u: SolutionField) -> float:
    """Total variation of the cell values including the periodic wrap"""
    return float(np.sum(np.abs(np.roll(u.values, -1) - u.values)))


def prolong(u: SolutionField, fine: GridSpec) -> SolutionField:
    """Piecewise-constant injection onto a nested finer grid"""
    ratio = u.grid.refinement_ratio(fine)
    if ratio == 1:
        return u
    return SolutionField(fine, np.repeat(u.values, ratio), u.time)


def restrict(u: SolutionField, coarse: GridSpec) -> SolutionField:
    """Cell averaging onto a nested coarser grid"""
    ratio = coarse.refinement_ratio(u.grid)
    if ratio == 1:
        return u
    return SolutionField(coarse, u.values.reshape(coarse.n_cells, ratio).mean(axis=1), u.time)


def common_refinement(u: SolutionField, v: SolutionField) -> tuple[SolutionField, SolutionField]:
    """Both fields prolonged to the finer of their two grids"""
    if u.grid.n_cells >= v.grid.n_cells:
        return u, prolong(v, u.grid)
    return prolong(u, v.grid), v


def l1_distance(u: SolutionField, v: SolutionField) -> float:
    """‖u − v‖_{L¹} on the common refinement of nested grids"""
    fine_u, fine_v = common_refinement(u, v)
    return float(np.sum(np.abs(fine_u.values - fine_v.values)) * fine_u.grid.dx)
