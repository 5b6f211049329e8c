"""
Full deterministic solves from t = 0 to the final time
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from pathlib import Path
from typing import IO

import numpy.typing as npt

from stochdiff.core import FloatArray, GridSpec, SolutionField, cell_average
from stochdiff.errors import GridError, NewtonConvergenceError
from stochdiff.flux import FluxModel, NumericalFlux, engquist_osher
from stochdiff.models.initial_data import InitialData

from .config import SchemeConfig, WorkCounter
from .steps import explicit_step, implicit_step_with_residual, max_stable_dt

logger = logging.getLogger(__name__)

InitialCondition = InitialData | SolutionField | Callable[[FloatArray], npt.ArrayLike]

# relative gap below which the remaining time counts as zero
TIME_EPS = 1e-12


def discretize_initial(initial: InitialCondition, grid: GridSpec) -> SolutionField:
    """Cell averages of the initial condition on grid"""
    if isinstance(initial, SolutionField):
        if initial.grid != grid:
            raise GridError(f"Initial field lives on {initial.grid}, expected {grid}")
        return initial.with_values(initial.values, time=0.0)
    if isinstance(initial, InitialData):
        return initial.project(grid)
    return cell_average(initial, grid)


def _implicit_advance(
    u: SolutionField,
    model: FluxModel,
    F: NumericalFlux,
    dt: float,
    cfg: SchemeConfig,
    work: WorkCounter,
) -> tuple[SolutionField, float, int]:
    try:
        return implicit_step_with_residual(u, model, F, dt, cfg, work)
    except NewtonConvergenceError as e:
        logger.warning(
            f"Newton failed at t={u.time:.6g} with dt={dt:.3e} (residual {e.residual:.3e}); retrying as two half steps"
        )
    half = 0.5 * dt
    mid, _, first = implicit_step_with_residual(u, model, F, half, cfg, work)
    end, residual, second = implicit_step_with_residual(mid, model, F, half, cfg, work)
    # the retry counts as one step of the original size
    work.steps -= 1
    return end, residual, first + second


def run(
    initial: InitialCondition,
    model: FluxModel,
    grid: GridSpec,
    cfg: SchemeConfig,
    T: float,
    *,
    flux: NumericalFlux | None = None,
    trace_path: Path | str | None = None,
) -> tuple[SolutionField, WorkCounter]:
    """
    Solve from the cell-averaged initial condition up to time T.

    Explicit runs step with max_stable_dt; implicit runs with theta·Δx. The
    last step is shortened so the returned field sits exactly at T.

    Args:
        initial: Initial datum, a callable u0(x) or a field already on grid
        model: Flux realization
        grid: Spatial grid
        cfg: Scheme configuration
        T: Final time
        flux: Numerical flux; the Engquist–Osher flux of model when omitted
        trace_path: Optional file receiving one "step time dt residual
            newton_iters" line per step

    Returns:
        Field at time T and the accumulated work
    """
    if not T > 0:
        raise ValueError(f"Final time must be positive, got {T}")

    F = flux if flux is not None else engquist_osher(model, tabulated=cfg.tabulated_flux)
    work = WorkCounter()
    u = discretize_initial(initial, grid)
    trace: IO[str] | None = Path(trace_path).open("w") if trace_path is not None else None

    if cfg.kind == "explicit":
        nominal_dt = max_stable_dt(model, F, grid, cfg, remaining=T)
    else:
        nominal_dt = cfg.theta * grid.dx
    logger.debug(f"{cfg.kind} run on {grid.n_cells} cells to T={T:.6g} with dt={nominal_dt:.3e} ({model.label})")

    started = time.perf_counter()
    step = 0
    try:
        while T - u.time > TIME_EPS * T:
            dt = min(nominal_dt, T - u.time)
            if cfg.kind == "explicit":
                u = explicit_step(u, model, F, dt, work)
                residual, iterations = 0.0, 0
            else:
                u, residual, iterations = _implicit_advance(u, model, F, dt, cfg, work)
            step += 1
            if trace is not None:
                trace.write(f"{step} {u.time:.17g} {dt:.17g} {residual:.17g} {iterations}\n")
    finally:
        if trace is not None:
            trace.close()

    work.wall_seconds += time.perf_counter() - started
    logger.debug(f"Finished {step} steps: {work.as_dict()}")
    return u.with_values(u.values, time=T), work
