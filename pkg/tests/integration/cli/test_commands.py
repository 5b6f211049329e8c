"""
Integration tests for the stochdiff command line
"""

from collections.abc import Iterator
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest
from click.testing import CliRunner, Result

from stochdiff import __version__, read_field
from stochdiff.harness.cli import cli
from tests.fixtures.experiments import SMALL_EXPERIMENT, write_experiment


@pytest.fixture(autouse=True)
def quiet_logging() -> Iterator[MagicMock]:
    """Keep the CLI from replacing the root handlers of the test process"""
    with patch("stochdiff.harness.cli.setup_logging") as mock_setup:
        yield mock_setup


@pytest.fixture
def experiment(tmp_path: Path) -> Path:
    return write_experiment(tmp_path)


def invoke(*args: str | Path) -> Result:
    return CliRunner().invoke(cli, [str(arg) for arg in args], catch_exceptions=False)


class TestRunCommands:
    """Test the solve, mc and mlmc commands"""

    def test_solve(self, experiment: Path, tmp_path: Path) -> None:
        out = tmp_path / "out"
        result = invoke("solve", "--config", experiment, "--output_dir", out, "--sample", "3")
        assert result.exit_code == 0, result.output

        dump = read_field(out / "solve_field.dat")
        assert dump.mean.grid.n_cells == 32
        assert dump.mean.time == pytest.approx(0.05)
        assert dump.metadata["sample"] == "3"
        assert dump.metadata["scheme"].startswith("kind='explicit'")
        assert "steps" in result.output

    def test_solve_trace(self, experiment: Path, tmp_path: Path) -> None:
        trace = tmp_path / "trace.txt"
        result = invoke("solve", "--config", experiment, "--output_dir", tmp_path, "--trace", trace)
        assert result.exit_code == 0, result.output
        assert len(trace.read_text().splitlines()) >= 1

    def test_mc(self, experiment: Path, tmp_path: Path) -> None:
        result = invoke("mc", "--config", experiment, "--output_dir", tmp_path, "--M", "2", "--L_max", "0")
        assert result.exit_code == 0, result.output

        dump = read_field(tmp_path / "mc_field.dat")
        assert dump.std is not None
        assert dump.metadata["m_samples"] == "2"
        assert dump.metadata["estimator"] == "mc"
        assert "M=2" in result.output

    def test_mlmc_is_reproducible(self, experiment: Path, tmp_path: Path) -> None:
        """Two runs with one seed write bit-identical field files"""
        first, second = tmp_path / "first", tmp_path / "second"
        for out in (first, second):
            result = invoke("mlmc", "--config", experiment, "--output_dir", out, "--L_max", "1")
            assert result.exit_code == 0, result.output

        assert (first / "mlmc_field.dat").read_bytes() == (second / "mlmc_field.dat").read_bytes()
        lines = (first / "mlmc_levels.csv").read_text().splitlines()
        assert lines[0].startswith("level,dx,M,")
        assert [line.split(",")[2] for line in lines[1:]] == ["4", "2"]
        flagged = read_field(first / "mlmc_field.dat").metadata["negative_variance_cells"]
        assert lines[-1].split(",")[-1] == flagged

    def test_worker_flag_keeps_output(self, experiment: Path, tmp_path: Path) -> None:
        for workers in ("1", "3"):
            result = invoke(
                "mlmc", "--config", experiment, "--output_dir", tmp_path / workers, "--L_max", "1", "--workers", workers
            )
            assert result.exit_code == 0, result.output
        assert (tmp_path / "1" / "mlmc_field.dat").read_bytes() == (tmp_path / "3" / "mlmc_field.dat").read_bytes()


class TestTable:
    """Test the convergence table command"""

    def test_table_rows(self, experiment: Path, tmp_path: Path) -> None:
        result = invoke("table", "--config", experiment, "--output_dir", tmp_path, "--L_max", "1", "--N", "1")
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "table.csv").read_text().splitlines()
        assert lines[0] == "L,RE,dx_L,runtime_s,bv,linf"
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "1", "rate"]
        assert "rate vs dx" in result.output

    @pytest.mark.slow
    def test_four_levels(self, experiment: Path, tmp_path: Path) -> None:
        """L_max = 3 gives four data rows and a rate row"""
        result = invoke("table", "--config", experiment, "--output_dir", tmp_path, "--L_max", "3", "--N", "1")
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "table.csv").read_text().splitlines()
        assert len(lines) == 1 + 4 + 1
        assert lines[-1].startswith("rate,,")


@pytest.mark.slow
def test_validate(experiment: Path, tmp_path: Path):
    result = invoke("validate", "--config", experiment)
    assert result.exit_code == 0, result.output
    assert "All 90 checks passed" in result.output
    assert "PASSED l1_stability" in result.output


class TestErrors:
    """Test diagnostics and exit codes"""

    def test_config_error_names_line(self, tmp_path: Path) -> None:
        path = write_experiment(tmp_path, SMALL_EXPERIMENT.replace("K = 1", "KK = 1"))
        result = invoke("solve", "--config", path, "--output_dir", tmp_path)
        assert result.exit_code == 1
        assert f"{path}:12:" in result.output
        assert "Unknown key 'KK'" in result.output

    def test_invalid_override(self, experiment: Path, tmp_path: Path) -> None:
        result = invoke("solve", "--config", experiment, "--output_dir", tmp_path, "--cfl", "2")
        assert result.exit_code == 1
        assert "scheme.cfl" in result.output
        assert not (tmp_path / "solve_field.dat").exists()

    def test_config_and_preset_are_exclusive(self, experiment: Path) -> None:
        result = invoke("solve", "--config", experiment, "--preset", "sine")
        assert result.exit_code == 2
        assert "mutually exclusive" in result.output

    def test_missing_config_file(self, tmp_path: Path) -> None:
        result = invoke("mlmc", "--config", tmp_path / "missing.ini")
        assert result.exit_code == 2


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert f"stochdiff, version {__version__}" in result.output


def test_logging_flags(experiment: Path, tmp_path: Path, quiet_logging: MagicMock):
    result = invoke("--debug", "solve", "--config", experiment, "--output_dir", tmp_path, "--L_max", "0")
    assert result.exit_code == 0, result.output
    quiet_logging.assert_called_once_with(debug=True, verbose=False)
