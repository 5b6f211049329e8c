"""
Theoretical work and error-bound models of the estimators
"""

from __future__ import annotations

import math

from stochdiff.solver import SchemeConfig

from .mlmc import LevelHierarchy, sample_allocation


def theoretical_work(h: LevelHierarchy, cfg: SchemeConfig) -> float:
    """
    Asymptotic work Σ_ℓ M_ℓ·W(Δx_ℓ) of an MLMC run, up to a constant.

    W(Δx) = Δx^{−11/3} for the explicit scheme under strict_rate_cfl,
    Δx^{−3} for the explicit scheme with the default CFL condition and
    Δx^{−2}·log(1/Δx) for the implicit scheme.
    """
    total = 0.0
    for level, count in enumerate(sample_allocation(h)):
        dx = h.dx(level)
        if cfg.kind == "implicit":
            cost = dx**-2 * max(math.log(1.0 / dx), 1.0)
        elif cfg.strict_rate_cfl:
            cost = dx ** (-11.0 / 3.0)
        else:
            cost = dx**-3
        total += count * cost
    return total


def mlmc_error_bound_shape(h: LevelHierarchy) -> float:
    """(L + 1)(1 + 2^{K/3})·Δx_L^{1/3}, the error bound without its constant"""
    return (h.L + 1) * (1.0 + 2.0 ** (h.K / 3.0)) * h.dx(h.L) ** (1.0 / 3.0)


def equilibrated_mc_samples(dx: float) -> int:
    """Sample count M = ceil(Δx^{−2/3}) balancing MC and discretization error"""
    if not dx > 0:
        raise ValueError(f"Cell size must be positive, got {dx}")
    return math.ceil(dx ** (-2.0 / 3.0) - 1e-12)
