"""
Convergence study: MLMC error and work against the finest level
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

from stochdiff.core import SolutionField, bv_seminorm, linf_norm
from stochdiff.estimators import mlmc_error_bound_shape, mlmc_estimate, theoretical_work
from stochdiff.sampling import derive_seed

from .config import ExperimentConfig
from .metrics import fit_rate, relative_error
from .reference import quadrature_reference

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ("L", "RE", "dx_L", "runtime_s", "bv", "linf")

# stream index reserved for MLMC reference runs
REFERENCE_STREAM = 0xFFFF


@dataclass(frozen=True)
class ErrorRow:
    """One table row: N estimator runs with finest level L"""

    L: int
    re: float
    dx: float
    runtime_s: float
    bv: float
    linf: float
    cell_updates: float
    work_model: float = math.nan
    error_bound: float = math.nan

    def csv_line(self) -> str:
        return f"{self.L},{self.re!r},{self.dx!r},{self.runtime_s:.6f},{self.bv!r},{self.linf!r}"


@dataclass
class ErrorReport:
    """
    Relative errors by finest level with fitted rates.

    rate_dx is the slope of log RE against log Δx_L. rate_work,
    rate_cell_updates and rate_work_model are the negated slopes against log
    runtime, log cell updates and log theoretical work, so RE ∼ work^{−rate}.
    bound_ratios divide RE by the shape of the MLMC error bound; they stay
    bounded while the estimator converges at the predicted rate.
    """

    rows: list[ErrorRow] = field(default_factory=list)
    rate_dx: float = math.nan
    rate_work: float = math.nan
    rate_cell_updates: float = math.nan
    rate_work_model: float = math.nan

    def fit(self) -> None:
        errors = [row.re for row in self.rows]
        self.rate_dx = fit_rate([row.dx for row in self.rows], errors)
        self.rate_work = -fit_rate([row.runtime_s for row in self.rows], errors)
        self.rate_cell_updates = -fit_rate([row.cell_updates for row in self.rows], errors)
        self.rate_work_model = -fit_rate([row.work_model for row in self.rows], errors)

    @property
    def bound_ratios(self) -> list[float]:
        return [row.re / row.error_bound for row in self.rows]

    def rate_line(self) -> str:
        return f"rate,,{self.rate_dx:.6g},{self.rate_work:.6g},,"

    def to_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as handle:
            handle.write(",".join(TABLE_COLUMNS) + "\n")
            for row in self.rows:
                handle.write(row.csv_line() + "\n")
            handle.write(self.rate_line() + "\n")
        return path


def build_reference(cfg: ExperimentConfig) -> SolutionField:
    """Reference mean on the grid of level cfg.reference_level"""
    model = cfg.random_model()
    hierarchy = cfg.level_hierarchy(cfg.reference_level)
    if cfg.run.reference == "quadrature":
        grid = hierarchy.grid(hierarchy.L)
        return quadrature_reference(
            model, grid, cfg.scheme, cfg.run.T, cfg.run.reference_nodes, workers=cfg.run.workers
        )
    seed = cfg.run.reference_seed
    if seed is None:
        seed = derive_seed(cfg.run.master_seed, REFERENCE_STREAM)
    result, _ = mlmc_estimate(model, hierarchy, cfg.scheme, cfg.run.T, seed, workers=cfg.run.workers)
    return result.mean


def convergence_study(
    cfg: ExperimentConfig,
    output_path: Path | str | None = None,
    reference: SolutionField | None = None,
) -> ErrorReport:
    """
    Relative error table for L = 0..L_max.

    Each row runs the MLMC estimator N times with seeds derived from
    (master_seed, L, replicate) and compares against the reference. When
    output_path is given, rows are written as they complete so a failing
    run leaves the finished rows on disk.
    """
    model = cfg.random_model()
    if reference is None:
        reference = build_reference(cfg)
    finest = cfg.level_hierarchy(cfg.hierarchy.L_max).grid(cfg.hierarchy.L_max)
    if reference.grid.n_cells <= finest.n_cells:
        raise ValueError("Reference must be strictly finer than the finest table level")

    report = ErrorReport()
    handle: IO[str] | None = None
    if output_path is not None:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        handle = path.open("w")
        handle.write(",".join(TABLE_COLUMNS) + "\n")
        handle.flush()

    try:
        for L in range(cfg.hierarchy.L_max + 1):
            hierarchy = cfg.level_hierarchy(L)
            means = []
            runtimes = []
            updates = []
            for replicate in range(cfg.run.N):
                seed = derive_seed(cfg.run.master_seed, L, replicate)
                result, _ = mlmc_estimate(model, hierarchy, cfg.scheme, cfg.run.T, seed, workers=cfg.run.workers)
                means.append(result.mean)
                runtimes.append(result.work.wall_seconds)
                updates.append(result.work.cell_updates)

            row = ErrorRow(
                L=L,
                re=relative_error(reference, means),
                dx=hierarchy.dx(L),
                runtime_s=math.fsum(runtimes) / len(runtimes),
                bv=math.fsum(bv_seminorm(mean) for mean in means) / len(means),
                linf=math.fsum(linf_norm(mean) for mean in means) / len(means),
                cell_updates=math.fsum(updates) / len(updates),
                work_model=theoretical_work(hierarchy, cfg.scheme),
                error_bound=mlmc_error_bound_shape(hierarchy),
            )
            report.rows.append(row)
            logger.info(
                f"L={L}: RE={row.re:.3f}% dx={row.dx:.4g} runtime={row.runtime_s:.2f}s "
                f"RE/bound={row.re / row.error_bound:.3g}"
            )
            if handle is not None:
                handle.write(row.csv_line() + "\n")
                handle.flush()

        report.fit()
        if handle is not None:
            handle.write(report.rate_line() + "\n")
    finally:
        if handle is not None:
            handle.close()

    logger.info(
        f"Rate vs dx {report.rate_dx:.3f}, vs runtime {report.rate_work:.3f}, "
        f"vs theoretical work {report.rate_work_model:.3f}"
    )
    return report
