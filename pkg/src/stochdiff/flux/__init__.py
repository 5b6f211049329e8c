"""
Flux realizations and monotone split numerical fluxes
"""

from .model import PROBE_POINTS, FluxModel, probe_grid
from .numerical import (
    TABLE_POINTS,
    NumericalFlux,
    check_splitting,
    engquist_osher,
    flux_eval,
    lax_friedrichs,
    upwind,
)

__all__ = [
    "PROBE_POINTS",
    "TABLE_POINTS",
    "FluxModel",
    "NumericalFlux",
    "check_splitting",
    "engquist_osher",
    "flux_eval",
    "lax_friedrichs",
    "probe_grid",
    "upwind",
]
