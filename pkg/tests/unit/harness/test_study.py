"""
Tests for the convergence study and its CSV table
"""

from pathlib import Path

import numpy as np
import pytest

from stochdiff.core import SolutionField, prolong
from stochdiff.estimators import mlmc_error_bound_shape, theoretical_work
from stochdiff.harness import ErrorReport, ErrorRow, build_reference, convergence_study, load_config
from stochdiff.harness.study import TABLE_COLUMNS
from stochdiff.solver import run
from tests.fixtures.experiments import write_experiment


def synthetic_report() -> ErrorReport:
    """Rows on the exact power laws RE ∝ dx^{2/3}, runtime ∝ dx^{-2}"""
    report = ErrorReport()
    for L in range(4):
        dx = 0.125 * 2.0**-L
        report.rows.append(
            ErrorRow(L, 10.0 * dx ** (2 / 3), dx, dx**-2, 1.4, 0.8, dx**-3, work_model=dx**-2, error_bound=dx ** (1 / 3))
        )
    report.fit()
    return report


class TestErrorReport:
    """Test rate fits and the table format"""

    def test_rates(self) -> None:
        report = synthetic_report()
        assert report.rate_dx == pytest.approx(2 / 3, abs=1e-6)
        assert report.rate_work == pytest.approx(1 / 3, abs=1e-6)
        assert report.rate_cell_updates == pytest.approx(2 / 9, abs=1e-6)
        assert report.rate_work_model == pytest.approx(1 / 3, abs=1e-6)

    def test_bound_ratios(self) -> None:
        """RE / bound shape is 10·dx^{1/3} for the synthetic rows"""
        report = synthetic_report()
        expected = [10.0 * (0.125 * 2.0**-L) ** (1 / 3) for L in range(4)]
        assert report.bound_ratios == pytest.approx(expected, rel=1e-12)

    def test_csv_layout(self, tmp_path: Path) -> None:
        lines = synthetic_report().to_csv(tmp_path / "table.csv").read_text().splitlines()
        assert lines[0] == "L,RE,dx_L,runtime_s,bv,linf"
        assert len(lines) == 1 + 4 + 1
        assert lines[1].startswith("0,")
        assert lines[1].split(",")[2] == "0.125"
        assert lines[-1] == "rate,,0.666667,0.333333,,"
        assert all(len(line.split(",")) == len(TABLE_COLUMNS) for line in lines)


@pytest.fixture
def deterministic_cfg(tmp_path: Path):
    """Zero-variance law on 8 and 16 cells with a 32-cell reference"""
    return load_config(
        write_experiment(tmp_path),
        {"distribution": "deterministic", "L_max": "1", "N": "1"},
    )


class TestConvergenceStudy:
    """Test the error table against deterministic discretization errors"""

    def test_deterministic_rows(self, deterministic_cfg, tmp_path: Path) -> None:
        """Each row's RE is the discretization error of the grid_L run"""
        reference = build_reference(deterministic_cfg)
        assert reference.grid.n_cells == 32

        report = convergence_study(deterministic_cfg, tmp_path / "table.csv", reference=reference)
        assert [row.L for row in report.rows] == [0, 1]

        sample = deterministic_cfg.random_model().sample_at(())
        hierarchy = deterministic_cfg.level_hierarchy()
        for row in report.rows:
            solution, _ = run(sample.initial, sample.flux, hierarchy.grid(row.L), deterministic_cfg.scheme, 0.05)
            fine = prolong(solution, reference.grid)
            expected = 100.0 * np.sum(np.abs(reference.values - fine.values)) / np.sum(np.abs(reference.values))
            assert row.re == pytest.approx(expected, rel=1e-6)
            assert row.dx == hierarchy.dx(row.L)
            assert row.linf <= 0.8 + 1e-10
            assert row.work_model == theoretical_work(hierarchy.with_finest(row.L), deterministic_cfg.scheme)
            assert row.error_bound == mlmc_error_bound_shape(hierarchy.with_finest(row.L))
        assert np.isfinite(report.rate_work_model)

        lines = (tmp_path / "table.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 + 1
        assert lines[-1].startswith("rate,,")

    def test_mlmc_reference(self, deterministic_cfg) -> None:
        """For a zero-variance law the MLMC reference is the finest deterministic run"""
        cfg = deterministic_cfg.with_overrides({"reference": "mlmc", "reference_L": "2"})
        reference = build_reference(cfg)
        sample = cfg.random_model().sample_at(())
        expected, _ = run(sample.initial, sample.flux, reference.grid, cfg.scheme, 0.05)
        np.testing.assert_allclose(reference.values, expected.values, rtol=0, atol=1e-12)

    def test_reference_must_be_finer(self, deterministic_cfg) -> None:
        finest = deterministic_cfg.level_hierarchy().grid(1)
        with pytest.raises(ValueError, match="strictly finer"):
            convergence_study(deterministic_cfg, reference=SolutionField.constant(finest, 0.5, 0.05))
