"""
Relative error estimator and log–log rate fits
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from stochdiff.core import SolutionField, prolong


def relative_error(reference: SolutionField, runs: Sequence[SolutionField]) -> float:
    """
    Root mean square over runs of the percent ℓ¹ deviation from reference.

    Each run is prolonged to the reference grid first; the ℓ¹ norm is the
    plain cell sum there.

    Raises:
        ValueError: if runs is empty or the reference vanishes
    """
    if not runs:
        raise ValueError("relative_error needs at least one run")
    norm = float(np.sum(np.abs(reference.values)))
    if norm == 0:
        raise ValueError("Relative error is undefined for a zero reference")

    squares = []
    for run in runs:
        fine = prolong(run, reference.grid)
        percent = 100.0 * float(np.sum(np.abs(reference.values - fine.values))) / norm
        squares.append(percent**2)
    return math.sqrt(math.fsum(squares) / len(squares))


def fit_rate(x: Sequence[float], errors: Sequence[float]) -> float:
    """
    Least-squares slope of log(errors) against log(x).

    Returns nan when fewer than two usable points remain; nonpositive errors
    are dropped.
    """
    if len(x) != len(errors):
        raise ValueError(f"fit_rate needs equal lengths, got {len(x)} and {len(errors)}")
    points = [(xi, ei) for xi, ei in zip(x, errors, strict=True) if xi > 0 and ei > 0]
    if len(points) < 2:
        return math.nan
    log_x = np.log([p[0] for p in points])
    log_e = np.log([p[1] for p in points])
    slope, _ = np.polyfit(log_x, log_e, 1)
    return float(slope)
