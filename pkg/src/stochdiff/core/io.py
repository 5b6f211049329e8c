"""
Plain-text field dumps

A dump holds one row per cell with columns ``x_center value [std]``. Header
lines start with '#' and carry ``key = value`` pairs: the grid, the field time,
and any provenance the caller attaches.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stochdiff.errors import GridError

from .grid import GridSpec, SolutionField

logger = logging.getLogger(__name__)

_GRID_KEYS = ("x_min", "x_max", "n_cells", "time")


@dataclass
class FieldDump:
    """Contents of a field dump file"""

    mean: SolutionField
    std: SolutionField | None = None
    metadata: dict[str, str] = field(default_factory=dict)


def write_field(
    path: Path | str,
    u: SolutionField,
    std: SolutionField | None = None,
    metadata: Mapping[str, object] | None = None,
) -> Path:
    """
    Write a field (and optionally its pointwise std) to a dump file.

    Values are written with 17 significant digits so a dump round-trips
    bit-exactly.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if std is not None and std.grid != u.grid:
        raise GridError("std field must share the grid of the mean field")

    header = [
        "stochdiff field dump",
        f"x_min = {u.grid.x_min!r}",
        f"x_max = {u.grid.x_max!r}",
        f"n_cells = {u.grid.n_cells}",
        f"time = {u.time!r}",
    ]
    for key, value in (metadata or {}).items():
        header.append(f"{key} = {value}")
    header.append("columns: x_center value" + (" std" if std is not None else ""))

    columns = [u.grid.centers, u.values]
    if std is not None:
        columns.append(std.values)
    np.savetxt(path, np.column_stack(columns), fmt="%.17g", header="\n".join(header), comments="# ")
    logger.debug(f"Wrote field with {u.grid.n_cells} cells to {path}")
    return path


def read_field(path: Path | str) -> FieldDump:
    """Read a dump written by write_field"""
    path = Path(path)
    metadata: dict[str, str] = {}
    with path.open() as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, sep, value = line[1:].partition("=")
            if sep:
                metadata[key.strip()] = value.strip()

    missing = [key for key in _GRID_KEYS if key not in metadata]
    if missing:
        raise GridError(f"Field dump {path} lacks header keys: {', '.join(missing)}")

    grid = GridSpec(float(metadata.pop("x_min")), float(metadata.pop("x_max")), int(metadata.pop("n_cells")))
    time = float(metadata.pop("time"))
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[0] != grid.n_cells:
        raise GridError(f"Field dump {path} has {data.shape[0]} rows for {grid.n_cells} cells")

    mean = SolutionField(grid, data[:, 1], time)
    std = SolutionField(grid, data[:, 2], time) if data.shape[1] > 2 else None
    return FieldDump(mean=mean, std=std, metadata=metadata)
