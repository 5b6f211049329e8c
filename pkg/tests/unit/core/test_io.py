"""
Tests for plain-text field dumps
"""

from pathlib import Path

import numpy as np
import pytest

from stochdiff.core import GridSpec, SolutionField, read_field, write_field
from stochdiff.errors import GridError


@pytest.fixture
def field() -> SolutionField:
    """Field with values that need all 17 digits"""
    grid = GridSpec(0.0, 2.0, 5)
    return SolutionField(grid, np.array([0.1, 1 / 3, np.pi / 7, 0.8, 2.0**-40]), time=0.3)


def test_dump_is_bit_exact(tmp_path: Path, field: SolutionField):
    """Reading a dump back returns the identical values"""
    path = write_field(tmp_path / "out" / "field.dat", field)
    dump = read_field(path)
    assert dump.mean.grid == field.grid
    assert dump.mean.time == field.time
    np.testing.assert_array_equal(dump.mean.values, field.values)
    assert dump.std is None


def test_dump_with_std_and_metadata(tmp_path: Path, field: SolutionField):
    """The std column and header provenance survive a dump"""
    std = field.with_values(np.full(5, 0.25))
    path = write_field(tmp_path / "field.dat", field, std, metadata={"master_seed": 42, "estimator": "mc"})
    dump = read_field(path)
    assert dump.std is not None
    np.testing.assert_array_equal(dump.std.values, std.values)
    assert dump.metadata["master_seed"] == "42"
    assert dump.metadata["estimator"] == "mc"


def test_header_lists_columns(tmp_path: Path, field: SolutionField):
    path = write_field(tmp_path / "field.dat", field)
    header = [line for line in path.read_text().splitlines() if line.startswith("#")]
    assert header[-1] == "# columns: x_center value"
    assert "# n_cells = 5" in header


def test_std_on_other_grid_is_rejected(tmp_path: Path, field: SolutionField):
    other = SolutionField.zeros(GridSpec(0.0, 2.0, 10))
    with pytest.raises(GridError):
        write_field(tmp_path / "field.dat", field, other)


def test_missing_header_is_rejected(tmp_path: Path):
    path = tmp_path / "bare.dat"
    path.write_text("0.5 1.0\n1.5 2.0\n")
    with pytest.raises(GridError):
        read_field(path)
