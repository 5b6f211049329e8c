"""
Two-phase flow models, random data laws and experiment initial data
"""

from .initial_data import InitialData, InitialDataKind, initial_data
from .random_data import DataSample, ModelKind, ParameterRange, RandomDataModel, draw_sample
from .two_phase import (
    PermeabilityPair,
    TwoPhaseParams,
    build_flux_model,
    capillary_pressure,
    capillary_pressure_derivative,
    diffusion_coefficient,
    fractional_flow,
    fractional_flow_derivative,
    power_law_permeability,
    residual_permeability,
)

__all__ = [
    "DataSample",
    "InitialData",
    "InitialDataKind",
    "ModelKind",
    "ParameterRange",
    "PermeabilityPair",
    "RandomDataModel",
    "TwoPhaseParams",
    "build_flux_model",
    "capillary_pressure",
    "capillary_pressure_derivative",
    "diffusion_coefficient",
    "draw_sample",
    "fractional_flow",
    "fractional_flow_derivative",
    "initial_data",
    "power_law_permeability",
    "residual_permeability",
]
