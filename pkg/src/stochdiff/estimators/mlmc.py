"""
Multilevel Monte Carlo on nested grids with coupled details
"""

from __future__ import annotations

import logging
import math
import time
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from stochdiff.core import FloatArray, GridSpec, SolutionField, prolong
from stochdiff.models import RandomDataModel
from stochdiff.solver import SchemeConfig, WorkCounter

from .mc import estimator_provenance, reduce_level
from .results import EstimatorResult, LevelDiagnostics, LevelStats, sample_moments
from .sampler import solve_level

logger = logging.getLogger(__name__)

# tolerance multiplier for negative assembled variances
VARIANCE_EPS_FACTOR = 10.0


class Level(NamedTuple):
    """One level of a hierarchy"""

    index: int
    dx: float
    grid: GridSpec
    m_samples: int


class LevelHierarchy(BaseModel):
    """
    Nested grids Δx_ℓ = 2^{−Kℓ}·dx0 for ℓ = 0..L with sample counts
    M_ℓ = ceil(m_base·2^{2K(L−ℓ)/3}).
    """

    model_config = ConfigDict(frozen=True)

    dx0: float = Field(default=0.125, gt=0, description="Cell size of the coarsest level")
    K: int = Field(default=1, ge=1, description="Each level refines by 2^K")
    L: int = Field(default=0, ge=0, description="Finest level index")
    m_base: int = Field(default=8, ge=1, description="Sample count of the finest level")
    x_min: float = Field(default=0.0, description="Left end of the periodic domain")
    x_max: float = Field(default=2.0, description="Right end of the periodic domain")

    @model_validator(mode="after")
    def validate_domain(self) -> LevelHierarchy:
        """dx0 must tile the domain"""
        if self.x_max <= self.x_min:
            raise ValueError(f"Empty domain [{self.x_min}, {self.x_max}]")
        cells = (self.x_max - self.x_min) / self.dx0
        if abs(cells - round(cells)) > 1e-9 * max(1.0, cells):
            raise ValueError(f"dx0={self.dx0} does not divide the domain length {self.x_max - self.x_min}")
        return self

    def grid(self, level: int) -> GridSpec:
        coarse = GridSpec.from_dx(self.x_min, self.x_max, self.dx0)
        return coarse.refine(2 ** (self.K * level)) if level > 0 else coarse

    def dx(self, level: int) -> float:
        return self.dx0 / 2 ** (self.K * level)

    def levels(self) -> list[Level]:
        allocation = sample_allocation(self)
        return [Level(level, self.dx(level), self.grid(level), allocation[level]) for level in range(self.L + 1)]

    def with_finest(self, L: int) -> LevelHierarchy:
        """Same hierarchy truncated or extended to finest level L"""
        return self.model_copy(update={"L": L})


def sample_allocation(h: LevelHierarchy) -> list[int]:
    """
    M_ℓ = ceil(m_base·2^{2K(L−ℓ)/3}) for ℓ = 0..L.

    Exponents divisible by 3 are evaluated in integers so exact powers of two
    never round up.
    """
    counts = []
    for level in range(h.L + 1):
        exponent = 2 * h.K * (h.L - level)
        if exponent % 3 == 0:
            counts.append(h.m_base * 2 ** (exponent // 3))
        else:
            counts.append(math.ceil(h.m_base * 2.0 ** (exponent / 3.0)))
    return counts


def _mlmc(
    model: RandomDataModel,
    h: LevelHierarchy,
    cfg: SchemeConfig,
    T: float,
    seed: int,
    order: int,
    workers: int | None,
) -> tuple[EstimatorResult, LevelDiagnostics]:
    started = time.perf_counter()
    levels = h.levels()
    finest = levels[-1].grid

    # telescoped first and second moments, both summed in level order
    first: FloatArray | None = None
    second: FloatArray | None = None
    total_variance: FloatArray | None = None
    diagnostics = LevelDiagnostics()
    counters: list[WorkCounter] = []

    for level in levels:
        level_started = time.perf_counter()
        coarse = levels[level.index - 1].grid if level.index > 0 else None
        samples = solve_level(model, cfg, T, seed, level.index, level.m_samples, level.grid, coarse, workers)

        level_first, first_variance = reduce_level(samples, 1)
        level_second, second_variance = reduce_level(samples, 2)
        variance = first_variance if order == 1 else second_variance
        first_fine = prolong(SolutionField(level.grid, level_first, T), finest).values
        second_fine = prolong(SolutionField(level.grid, level_second, T), finest).values
        variance_fine = prolong(SolutionField(level.grid, variance, T), finest).values
        if first is None or second is None or total_variance is None:
            first, second, total_variance = first_fine.copy(), second_fine.copy(), variance_fine.copy()
        else:
            first += first_fine
            second += second_fine
            total_variance += variance_fine

        work = WorkCounter.total([sample.work for sample in samples])
        counters.append(work)
        detail_mean, detail_var = sample_moments([np.array([sample.detail_l1()]) for sample in samples])
        diagnostics.levels.append(
            LevelStats(
                level=level.index,
                dx=level.dx,
                m_samples=level.m_samples,
                detail_l1_mean=float(detail_mean[0]),
                detail_l1_var=float(detail_var[0]),
                work_cell_updates=work.cell_updates,
                wall_seconds=time.perf_counter() - level_started,
                negative_variance_cells=len(_variance_defects(first, second)),
            )
        )
        logger.debug(f"Level {level.index}: mean detail {detail_mean[0]:.4e}, variance {detail_var[0]:.4e}")

    assert first is not None and second is not None and total_variance is not None
    first_field = SolutionField(finest, first, T)
    second_field = SolutionField(finest, second, T)
    flagged = negative_variance_cells(first_field, second_field)

    work = WorkCounter.total(counters)
    work.wall_seconds = time.perf_counter() - started
    allocation = tuple(level.m_samples for level in levels)
    provenance = estimator_provenance(model, cfg, seed, "mlmc" if order == 1 else f"mlmc_moment{order}", T)
    provenance.update(
        {
            "dx0": repr(h.dx0),
            "K": str(h.K),
            "L": str(h.L),
            "m_base": str(h.m_base),
            "negative_variance_cells": str(len(flagged)),
        }
    )

    result = EstimatorResult(
        mean=first_field if order == 1 else second_field,
        std=SolutionField(finest, np.sqrt(total_variance), T),
        m_samples=allocation,
        work=work,
        provenance=provenance,
        negative_variance_cells=tuple(flagged),
    )
    logger.info(f"MLMC estimate with L={h.L}, M={allocation} took {work.wall_seconds:.2f}s")
    return result, diagnostics


def mlmc_estimate(
    model: RandomDataModel,
    h: LevelHierarchy,
    cfg: SchemeConfig,
    T: float,
    seed: int,
    *,
    workers: int | None = None,
) -> tuple[EstimatorResult, LevelDiagnostics]:
    """
    MLMC mean E^L = Σ_ℓ E_{M_ℓ}[u_ℓ − u_{ℓ−1}] on the finest grid.

    Sample i of level ℓ draws its data once from stream (seed, ℓ, i) and solves
    it on grid_ℓ and grid_{ℓ−1}. Level means are prolonged to grid_L and summed
    in level order. The std field is the square root of the summed per-level
    detail variances. The second moment is telescoped from the same samples;
    cells where E^{L,(2)} − (E^L)² is negative beyond rounding are logged and
    listed in result.negative_variance_cells.

    Raises:
        SampleFailureError: naming the failing (level, index)
    """
    return _mlmc(model, h, cfg, T, seed, 1, workers)


def mlmc_second_moment(
    model: RandomDataModel,
    h: LevelHierarchy,
    cfg: SchemeConfig,
    T: float,
    seed: int,
    *,
    workers: int | None = None,
) -> EstimatorResult:
    """Telescoped pointwise second moment Σ_ℓ E_{M_ℓ}[u_ℓ² − u_{ℓ−1}²]"""
    return _mlmc(model, h, cfg, T, seed, 2, workers)[0]


def _variance_defects(first: FloatArray, second: FloatArray) -> list[int]:
    scale = float(np.max(np.maximum(np.abs(second), first**2)))
    threshold = -VARIANCE_EPS_FACTOR * np.finfo(np.float64).eps * scale
    cells: list[int] = np.flatnonzero(second - first**2 < threshold).tolist()
    return cells


def negative_variance_cells(first: SolutionField, second: SolutionField) -> list[int]:
    """
    Cells where the assembled variance E^{(2)} − (E)² falls below
    −10·eps·scale; such cells are logged as a warning.
    """
    if first.grid != second.grid:
        raise ValueError("Moment fields must share one grid")
    cells = _variance_defects(first.values, second.values)
    if cells:
        logger.warning(f"Assembled variance is negative beyond tolerance in {len(cells)} cells, first at {cells[0]}")
    return cells
