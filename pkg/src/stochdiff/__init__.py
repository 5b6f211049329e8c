"""
stochdiff - Monte Carlo and multilevel Monte Carlo for degenerate
convection–diffusion equations with random fluxes

Monotone explicit and implicit finite-difference solvers for
u_t + f(u)_x = A(u)_xx on periodic 1D grids, the two-phase flow closures they
are exercised with, and estimators of the mean and variance of the random
entropy solution with reproducible seeded sampling.
"""

__version__ = "0.1.0"

from .core import GridSpec, SolutionField, read_field, write_field
from .errors import (
    ConfigError,
    FluxConstructionError,
    GridError,
    NewtonConvergenceError,
    QuadratureError,
    SampleFailureError,
    SingularMatrixError,
    StabilityViolationError,
    StochdiffError,
)
from .estimators import (
    EstimatorResult,
    LevelDiagnostics,
    LevelHierarchy,
    mc_estimate,
    mc_second_moment,
    mlmc_estimate,
    mlmc_second_moment,
    sample_allocation,
)
from .flux import FluxModel, NumericalFlux, engquist_osher, lax_friedrichs, upwind
from .harness import ExperimentConfig, convergence_study, load_config, quadrature_reference, relative_error
from .models import RandomDataModel, TwoPhaseParams, draw_sample, initial_data
from .sampling import SeedStream, stream_for, uniform
from .solver import SchemeConfig, WorkCounter, run

__all__ = [
    "ConfigError",
    "EstimatorResult",
    "ExperimentConfig",
    "FluxConstructionError",
    "FluxModel",
    "GridError",
    "GridSpec",
    "LevelDiagnostics",
    "LevelHierarchy",
    "NewtonConvergenceError",
    "NumericalFlux",
    "QuadratureError",
    "RandomDataModel",
    "SampleFailureError",
    "SchemeConfig",
    "SeedStream",
    "SingularMatrixError",
    "SolutionField",
    "StabilityViolationError",
    "StochdiffError",
    "TwoPhaseParams",
    "WorkCounter",
    "__version__",
    "convergence_study",
    "draw_sample",
    "engquist_osher",
    "initial_data",
    "lax_friedrichs",
    "load_config",
    "mc_estimate",
    "mc_second_moment",
    "mlmc_estimate",
    "mlmc_second_moment",
    "quadrature_reference",
    "read_field",
    "relative_error",
    "run",
    "sample_allocation",
    "stream_for",
    "uniform",
    "upwind",
    "write_field",
]
