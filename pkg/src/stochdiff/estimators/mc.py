"""
Single-level Monte Carlo estimation of pointwise moments
"""

from __future__ import annotations

import logging
import time

import numpy as np

from stochdiff.core import FloatArray, GridSpec
from stochdiff.models import RandomDataModel
from stochdiff.solver import SchemeConfig, WorkCounter

from .results import EstimatorResult, sample_moments
from .sampler import LevelSample, solve_level

logger = logging.getLogger(__name__)


def reduce_level(samples: list[LevelSample], order: int) -> tuple[FloatArray, FloatArray]:
    """Mean and unbiased variance of the order-k moment details, in index order"""
    return sample_moments([sample.moment(order) for sample in samples])


def estimator_provenance(
    model: RandomDataModel, cfg: SchemeConfig, seed: int, estimator: str, T: float
) -> dict[str, str]:
    return {
        "estimator": estimator,
        "master_seed": str(seed),
        "T": repr(T),
        "model": model.descriptor(),
        "scheme": cfg.describe(),
    }


def _mc(
    model: RandomDataModel,
    grid: GridSpec,
    cfg: SchemeConfig,
    T: float,
    M: int,
    seed: int,
    order: int,
    workers: int | None,
) -> EstimatorResult:
    if M < 1:
        raise ValueError(f"Sample count must be at least 1, got {M}")

    started = time.perf_counter()
    samples = solve_level(model, cfg, T, seed, 0, M, grid, None, workers)
    mean, variance = reduce_level(samples, order)

    work = WorkCounter.total([sample.work for sample in samples])
    # wall time of the estimator, not the sum over workers
    work.wall_seconds = time.perf_counter() - started
    first = samples[0].fine
    result = EstimatorResult(
        mean=first.with_values(mean),
        std=first.with_values(np.sqrt(variance)),
        m_samples=M,
        work=work,
        provenance=estimator_provenance(model, cfg, seed, "mc" if order == 1 else f"mc_moment{order}", T),
    )
    logger.info(f"MC estimate with M={M} on {grid.n_cells} cells took {work.wall_seconds:.2f}s")
    return result


def mc_estimate(
    model: RandomDataModel,
    grid: GridSpec,
    cfg: SchemeConfig,
    T: float,
    M: int,
    seed: int,
    *,
    workers: int | None = None,
) -> EstimatorResult:
    """
    Monte Carlo mean of the solution at time T.

    Sample i is drawn from stream (seed, 0, i). The mean and the unbiased
    pointwise standard deviation are reduced in index order, so the result
    does not depend on the worker count.

    Raises:
        ValueError: if M < 1
        SampleFailureError: naming the failing (level=0, index)
    """
    return _mc(model, grid, cfg, T, M, seed, 1, workers)


def mc_second_moment(
    model: RandomDataModel,
    grid: GridSpec,
    cfg: SchemeConfig,
    T: float,
    M: int,
    seed: int,
    *,
    workers: int | None = None,
) -> EstimatorResult:
    """Monte Carlo pointwise second moment (1/M)Σ(û^i)² with its sampling std"""
    return _mc(model, grid, cfg, T, M, seed, 2, workers)
