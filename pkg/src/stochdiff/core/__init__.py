"""
Periodic grids, cell-averaged fields, norms and inter-grid transfer
"""

from .fields import (
    bv_seminorm,
    cell_average,
    common_refinement,
    l1_distance,
    l1_norm,
    linf_norm,
    prolong,
    restrict,
)
from .grid import FloatArray, GridSpec, SolutionField
from .io import FieldDump, read_field, write_field

__all__ = [
    "FieldDump",
    "FloatArray",
    "GridSpec",
    "SolutionField",
    "bv_seminorm",
    "cell_average",
    "common_refinement",
    "l1_distance",
    "l1_norm",
    "linf_norm",
    "prolong",
    "read_field",
    "restrict",
    "write_field",
]
