"""
Coupled level samples: one random draw solved on a fine and a coarse grid
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial

import numpy as np

from stochdiff.core import FloatArray, GridSpec, SolutionField, prolong
from stochdiff.flux import engquist_osher
from stochdiff.models import RandomDataModel, draw_sample
from stochdiff.sampling import SampleTask, run_samples, stream_for
from stochdiff.solver import SchemeConfig, WorkCounter, run

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LevelSample:
    """Result of one (level, index) task"""

    level: int
    index: int
    fine: SolutionField
    coarse: SolutionField | None
    work: WorkCounter
    parameters: dict[str, float]

    def moment(self, order: int) -> FloatArray:
        """Detail of the pointwise moment: u_ℓ^k − u_{ℓ−1}^k on the fine grid"""
        values = self.fine.values**order
        if self.coarse is None:
            return values
        return values - prolong(self.coarse, self.fine.grid).values ** order

    def detail_l1(self) -> float:
        """‖u_ℓ − u_{ℓ−1}‖_{L¹}, with u_{−1} = 0"""
        return float(np.sum(np.abs(self.moment(1))) * self.fine.grid.dx)


def solve_level_sample(
    model: RandomDataModel,
    cfg: SchemeConfig,
    T: float,
    seed: int,
    level: int,
    index: int,
    fine_grid: GridSpec,
    coarse_grid: GridSpec | None,
) -> LevelSample:
    """
    Draw the data of stream (seed, level, index) once and solve it on
    fine_grid and, when given, on coarse_grid.
    """
    sample = draw_sample(model, stream_for(seed, level, index))
    F = engquist_osher(sample.flux, tabulated=cfg.tabulated_flux)

    fine, work = run(sample.initial, sample.flux, fine_grid, cfg, T, flux=F)
    coarse = None
    if coarse_grid is not None:
        coarse, coarse_work = run(sample.initial, sample.flux, coarse_grid, cfg, T, flux=F)
        work.add(coarse_work)
    return LevelSample(level, index, fine, coarse, work, sample.parameters)


def solve_level(
    model: RandomDataModel,
    cfg: SchemeConfig,
    T: float,
    seed: int,
    level: int,
    m_samples: int,
    fine_grid: GridSpec,
    coarse_grid: GridSpec | None,
    workers: int | None = None,
) -> list[LevelSample]:
    """All M samples of one level, returned in index order"""
    tasks = [
        SampleTask(
            level=level,
            index=index,
            run=partial(solve_level_sample, model, cfg, T, seed, level, index, fine_grid, coarse_grid),
        )
        for index in range(m_samples)
    ]
    logger.info(f"Level {level}: {m_samples} samples on {fine_grid.n_cells} cells")
    return run_samples(tasks, workers)
