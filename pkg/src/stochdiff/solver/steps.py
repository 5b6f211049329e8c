"""
Single time steps of the explicit and implicit monotone schemes
"""

from __future__ import annotations

import logging
import math

import numpy as np

from stochdiff.core import FloatArray, GridSpec, SolutionField
from stochdiff.errors import NewtonConvergenceError, StabilityViolationError
from stochdiff.flux import FluxModel, NumericalFlux

from .config import SchemeConfig, WorkCounter
from .linalg import thomas_periodic

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-8


def _as_array(values: object) -> FloatArray:
    return np.asarray(values, dtype=np.float64)


def max_stable_dt(
    model: FluxModel,
    F: NumericalFlux,
    grid: GridSpec,
    cfg: SchemeConfig,
    remaining: float | None = None,
) -> float:
    """
    Largest explicit Δt with (Δt/Δx)(sup f1' − inf f2') + 2(Δt/Δx²) sup A' ≤ cfl.

    Suprema are taken over the probe grid of the state interval. With
    strict_rate_cfl the step is further capped by cfl·Δx^{8/3}.

    Args:
        model: Flux realization
        F: Split numerical flux
        grid: Spatial grid
        cfg: Scheme configuration (must be explicit)
        remaining: Time left until the final time, returned when neither
            transport nor diffusion is present

    Raises:
        ValueError: if cfg is not an explicit configuration
    """
    if cfg.kind != "explicit":
        raise ValueError("max_stable_dt applies to the explicit scheme only")

    probe = model.probe
    sup_df1 = float(np.max(np.broadcast_to(_as_array(F.df1(probe)), probe.shape)))
    inf_df2 = float(np.min(np.broadcast_to(_as_array(F.df2(probe)), probe.shape)))
    sup_a = float(np.max(np.broadcast_to(_as_array(model.dA(probe)), probe.shape)))
    dx = grid.dx

    rate = (sup_df1 - inf_df2) / dx + 2.0 * max(sup_a, 0.0) / dx**2
    if rate <= 0:
        return math.inf if remaining is None else remaining

    dt = cfg.cfl / rate
    if cfg.strict_rate_cfl:
        dt = min(dt, cfg.cfl * dx ** (8.0 / 3.0))
    return dt


def _check_bounds(values: FloatArray, model: FluxModel) -> None:
    low = model.m_minus - BOUND_SLACK
    high = model.m_plus + BOUND_SLACK
    outside = np.flatnonzero((values < low) | (values > high) | ~np.isfinite(values))
    if outside.size:
        cell = int(outside[0])
        raise StabilityViolationError(cell, float(values[cell]), (model.m_minus, model.m_plus))


def explicit_step(
    u: SolutionField,
    model: FluxModel,
    F: NumericalFlux,
    dt: float,
    work: WorkCounter,
) -> SolutionField:
    """
    One explicit conservative step with periodic wrap.

    Raises:
        StabilityViolationError: if a cell leaves [M₋ − 1e-8, M₊ + 1e-8]
    """
    w = u.values
    dx = u.grid.dx
    right = np.roll(w, -1)

    interface = F(w, right)
    A = _as_array(model.A(w))
    values = (
        w
        - (dt / dx) * (interface - np.roll(interface, 1))
        + (dt / dx**2) * (np.roll(A, -1) - 2.0 * A + np.roll(A, 1))
    )

    n = len(u)
    work.flux_evals += n
    work.cell_updates += n
    work.steps += 1

    _check_bounds(values, model)
    return u.with_values(values, time=u.time + dt)


def implicit_residual(
    w: FloatArray, u: FloatArray, model: FluxModel, F: NumericalFlux, dt: float, dx: float
) -> FloatArray:
    """G(w) = w − u + (Δt/Δx) D₋F(w_j, w_{j+1}) − (Δt/Δx²) D₋D₊A(w_j)"""
    interface = F(w, np.roll(w, -1))
    A = _as_array(model.A(w))
    residual: FloatArray = (
        w
        - u
        + (dt / dx) * (interface - np.roll(interface, 1))
        - (dt / dx**2) * (np.roll(A, -1) - 2.0 * A + np.roll(A, 1))
    )
    return residual


def _newton_solve(
    u: SolutionField,
    model: FluxModel,
    F: NumericalFlux,
    dt: float,
    cfg: SchemeConfig,
    work: WorkCounter,
) -> tuple[FloatArray, float, int]:
    dx = u.grid.dx
    n = len(u)
    r = dt / dx
    mu = dt / dx**2
    tolerance = cfg.newton_tol_factor * dx * dt

    start = u.values
    w = start.copy()
    residual = implicit_residual(w, start, model, F, dt, dx)
    work.flux_evals += n
    norm = float(np.sum(np.abs(residual)) * dx)

    iterations = 0
    while not norm <= tolerance:
        if iterations >= cfg.newton_max_iter or not np.isfinite(norm):
            raise NewtonConvergenceError(norm, iterations, tolerance)

        df1 = np.broadcast_to(_as_array(F.df1(w)), w.shape)
        df2 = np.broadcast_to(_as_array(F.df2(w)), w.shape)
        a = np.broadcast_to(_as_array(model.dA(w)), w.shape)

        diag = 1.0 + r * (df1 - df2) + 2.0 * mu * a
        # row j couples to w_{j+1} through f2' and to w_{j-1} through f1'
        upper = r * np.roll(df2, -1) - mu * np.roll(a, -1)
        lower = -r * np.roll(df1, 1) - mu * np.roll(a, 1)

        delta = thomas_periodic(lower, diag, upper, float(upper[-1]), float(lower[0]), -residual)
        w = w + delta
        iterations += 1
        work.newton_iters += 1
        work.linear_solves += 1

        residual = implicit_residual(w, start, model, F, dt, dx)
        work.flux_evals += n
        norm = float(np.sum(np.abs(residual)) * dx)
        logger.debug(f"Newton iteration {iterations}: scaled residual {norm:.3e} (target {tolerance:.3e})")

    return w, norm, iterations


def implicit_step(
    u: SolutionField,
    model: FluxModel,
    F: NumericalFlux,
    dt: float,
    cfg: SchemeConfig,
    work: WorkCounter,
) -> SolutionField:
    """
    One implicit step by plain Newton iteration from w⁰ = u.

    The Jacobian is cyclic tridiagonal and each Newton update is one
    thomas_periodic solve. Iteration stops once Σ|G_j|·Δx ≤
    newton_tol_factor·Δx·Δt.

    Raises:
        NewtonConvergenceError: after newton_max_iter iterations above tolerance
        SingularMatrixError: if a Jacobian is singular
    """
    return implicit_step_with_residual(u, model, F, dt, cfg, work)[0]


def implicit_step_with_residual(
    u: SolutionField,
    model: FluxModel,
    F: NumericalFlux,
    dt: float,
    cfg: SchemeConfig,
    work: WorkCounter,
) -> tuple[SolutionField, float, int]:
    """implicit_step that also reports the final residual and Newton iteration count"""
    values, residual, iterations = _newton_solve(u, model, F, dt, cfg, work)
    work.cell_updates += len(u)
    work.steps += 1
    return u.with_values(values, time=u.time + dt), residual, iterations
