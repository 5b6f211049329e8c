"""
Estimator results, per-level diagnostics and the deterministic sample reduction
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stochdiff.core import FloatArray, SolutionField, write_field
from stochdiff.solver import WorkCounter

logger = logging.getLogger(__name__)

LEVEL_CSV_COLUMNS = (
    "level",
    "dx",
    "M",
    "detail_l1_mean",
    "detail_l1_var",
    "work_cell_updates",
    "wall_seconds",
    "negative_variance_cells",
)


def pairwise_sum(items: Sequence[FloatArray]) -> FloatArray:
    """
    Sum arrays over a fixed binary tree of their indices.

    The tree depends only on len(items), so the rounding of the result is
    independent of the order in which the items were computed.
    """
    if not items:
        raise ValueError("pairwise_sum needs at least one item")
    if len(items) == 1:
        return np.array(items[0], dtype=np.float64)
    middle = len(items) // 2
    return pairwise_sum(items[:middle]) + pairwise_sum(items[middle:])


def sample_moments(samples: Sequence[FloatArray]) -> tuple[FloatArray, FloatArray]:
    """
    Sample mean and unbiased sample variance, both reduced with pairwise_sum.

    The variance of a single sample is zero.
    """
    count = len(samples)
    mean = pairwise_sum(samples) / count
    if count == 1:
        return mean, np.zeros_like(mean)
    variance = pairwise_sum([(sample - mean) ** 2 for sample in samples]) / (count - 1)
    return mean, variance


@dataclass(frozen=True, eq=False)
class EstimatorResult:
    """Pointwise estimate with its sampling standard deviation"""

    mean: SolutionField
    std: SolutionField
    m_samples: int | tuple[int, ...]
    work: WorkCounter
    provenance: dict[str, str] = field(default_factory=dict)
    negative_variance_cells: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.std.grid != self.mean.grid or self.std.time != self.mean.time:
            raise ValueError("mean and std must share one grid and time stamp")
        if np.any(self.std.values < 0):
            raise ValueError("std must be nonnegative")

    @property
    def total_samples(self) -> int:
        return self.m_samples if isinstance(self.m_samples, int) else sum(self.m_samples)

    def dump(self, path: Path | str, extra: Mapping[str, object] | None = None) -> Path:
        """Write mean and std as one field dump with the provenance in the header"""
        metadata: dict[str, object] = {**self.provenance}
        metadata["m_samples"] = (
            self.m_samples if isinstance(self.m_samples, int) else ",".join(map(str, self.m_samples))
        )
        metadata.update(extra or {})
        return write_field(path, self.mean, self.std, metadata)


@dataclass(frozen=True)
class LevelStats:
    """
    Detail statistics of one MLMC level.

    negative_variance_cells counts the finest-grid cells where the estimator
    truncated after this level has a variance below the rounding tolerance.
    """

    level: int
    dx: float
    m_samples: int
    detail_l1_mean: float
    detail_l1_var: float
    work_cell_updates: int
    wall_seconds: float
    negative_variance_cells: int = 0

    def row(self) -> list[object]:
        return [
            self.level,
            repr(self.dx),
            self.m_samples,
            repr(self.detail_l1_mean),
            repr(self.detail_l1_var),
            self.work_cell_updates,
            f"{self.wall_seconds:.6f}",
            self.negative_variance_cells,
        ]


@dataclass
class LevelDiagnostics:
    """Per-level detail norms and work of one MLMC estimate"""

    levels: list[LevelStats] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def detail_means(self) -> list[float]:
        return [stats.detail_l1_mean for stats in self.levels]

    @property
    def cell_updates(self) -> int:
        return sum(stats.work_cell_updates for stats in self.levels)

    def write_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(LEVEL_CSV_COLUMNS)
            for stats in self.levels:
                writer.writerow(stats.row())
        logger.debug(f"Wrote {len(self.levels)} level rows to {path}")
        return path
