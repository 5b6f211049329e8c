"""
Explicit and implicit time stepping with work accounting
"""

from .config import SchemeConfig, SchemeKind, WorkCounter
from .linalg import thomas_periodic
from .run import discretize_initial, run
from .steps import (
    explicit_step,
    implicit_residual,
    implicit_step,
    implicit_step_with_residual,
    max_stable_dt,
)

__all__ = [
    "SchemeConfig",
    "SchemeKind",
    "WorkCounter",
    "discretize_initial",
    "explicit_step",
    "implicit_residual",
    "implicit_step",
    "implicit_step_with_residual",
    "max_stable_dt",
    "run",
    "thomas_periodic",
]
