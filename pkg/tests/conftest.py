"""
Shared test fixtures for the test suite
"""

import pytest

from stochdiff.core import GridSpec
from stochdiff.flux import FluxModel
from stochdiff.models import RandomDataModel, TwoPhaseParams, build_flux_model, power_law_permeability
from stochdiff.solver import SchemeConfig
from tests.fixtures.models import linear_flux_model


@pytest.fixture
def advection_model() -> FluxModel:
    """Pure transport f(u) = u, no diffusion"""
    return linear_flux_model(speed=1.0)


@pytest.fixture
def heat_model() -> FluxModel:
    """Pure diffusion A(u) = u"""
    return linear_flux_model(speed=0.0, diffusivity=1.0)


@pytest.fixture(scope="session")
def two_phase_model() -> FluxModel:
    """Power-law mobilities with p = 2 on the Riemann data range"""
    return build_flux_model(power_law_permeability(2.0), TwoPhaseParams(), (0.1, 0.8))


@pytest.fixture
def unit_grid() -> GridSpec:
    return GridSpec(0.0, 1.0, 4)


@pytest.fixture
def explicit_config() -> SchemeConfig:
    return SchemeConfig.explicit()


@pytest.fixture
def implicit_config() -> SchemeConfig:
    """Implicit scheme with a tight Newton target"""
    return SchemeConfig.implicit(newton_tol_factor=1e-8)


@pytest.fixture
def deterministic_law() -> RandomDataModel:
    return RandomDataModel(kind="deterministic", deterministic_exponent=2.0)


@pytest.fixture
def exponent_law() -> RandomDataModel:
    return RandomDataModel(kind="random_exponent")


@pytest.fixture
def residual_law() -> RandomDataModel:
    return RandomDataModel(kind="random_residual")
