"""
Monte Carlo and multilevel Monte Carlo estimators of pointwise moments
"""

from .mc import mc_estimate, mc_second_moment
from .mlmc import (
    Level,
    LevelHierarchy,
    mlmc_estimate,
    mlmc_second_moment,
    negative_variance_cells,
    sample_allocation,
)
from .results import (
    LEVEL_CSV_COLUMNS,
    EstimatorResult,
    LevelDiagnostics,
    LevelStats,
    pairwise_sum,
    sample_moments,
)
from .sampler import LevelSample, solve_level, solve_level_sample
from .work import equilibrated_mc_samples, mlmc_error_bound_shape, theoretical_work

__all__ = [
    "LEVEL_CSV_COLUMNS",
    "EstimatorResult",
    "Level",
    "LevelDiagnostics",
    "LevelHierarchy",
    "LevelSample",
    "LevelStats",
    "equilibrated_mc_samples",
    "mc_estimate",
    "mc_second_moment",
    "mlmc_error_bound_shape",
    "mlmc_estimate",
    "mlmc_second_moment",
    "negative_variance_cells",
    "pairwise_sum",
    "sample_allocation",
    "sample_moments",
    "solve_level",
    "solve_level_sample",
    "theoretical_work",
]
