"""
Tests for the two-phase flow closures and the flux model they induce
"""

import logging

import numpy as np
import pytest
from scipy.integrate import trapezoid

from stochdiff.errors import FluxConstructionError
from stochdiff.models import (
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


@pytest.fixture
def quadratic() -> PermeabilityPair:
    return power_law_permeability(2.0)


class TestCapillaryPressure:
    """Test p_c and its derivative"""

    def test_vanishes_at_full_saturation(self) -> None:
        assert capillary_pressure(1.0) == 0.0

    def test_known_value(self) -> None:
        """s^{−4/3} = 2 at s = 2^{−3/4}, so p_c = −1"""
        assert capillary_pressure(2.0**-0.75) == pytest.approx(-1.0, rel=1e-12)

    @pytest.mark.parametrize("s", [0.0, -0.1, 1.2])
    def test_rejects_states_outside_unit_interval(self, s: float) -> None:
        with pytest.raises(ValueError):
            capillary_pressure(s)

    def test_derivative_matches_finite_differences(self) -> None:
        s = np.array([0.2, 0.5, 0.7])
        h = 1e-6
        numeric = (capillary_pressure(s + h) - capillary_pressure(s - h)) / (2 * h)
        np.testing.assert_allclose(capillary_pressure_derivative(s), numeric, rtol=1e-6)

    def test_derivative_at_half(self) -> None:
        assert capillary_pressure_derivative(0.5) == pytest.approx(1.2272, rel=1e-4)


class TestDiffusionCoefficient:
    """Test the capillary diffusion a(s)"""

    def test_zero_outside_unit_interval(self, quadratic: PermeabilityPair) -> None:
        a = diffusion_coefficient(np.array([-0.2, 0.0, 1.0, 1.3]), quadratic, TwoPhaseParams())
        np.testing.assert_array_equal(a, 0.0)

    def test_value_at_half(self, quadratic: PermeabilityPair) -> None:
        """λ^wλ^o/(λ^w + λ^o) = 1/8 at s = 1/2 for p = 2"""
        params = TwoPhaseParams(nu=1.0)
        expected = 0.125 * capillary_pressure_derivative(0.5)
        assert diffusion_coefficient(0.5, quadratic, params) == pytest.approx(expected, rel=1e-14)
        assert diffusion_coefficient(0.5, quadratic, params) == pytest.approx(0.1534, rel=1e-3)

    def test_degenerates_at_both_ends(self, quadratic: PermeabilityPair) -> None:
        """a ~ s^{2/3} near 0 and vanishes faster near 1"""
        params = TwoPhaseParams()
        middle = float(diffusion_coefficient(0.5, quadratic, params))
        assert diffusion_coefficient(1e-4, quadratic, params) < 1e-2 * middle
        assert diffusion_coefficient(1e-6, quadratic, params) < 1e-3 * middle
        assert diffusion_coefficient(1 - 1e-4, quadratic, params) < 1e-4 * middle

    def test_nonnegative(self, quadratic: PermeabilityPair) -> None:
        s = np.linspace(-0.5, 1.5, 2001)
        assert np.all(diffusion_coefficient(s, quadratic, TwoPhaseParams()) >= 0)

    def test_rejects_invalid_clamp(self) -> None:
        with pytest.raises(ValueError):
            TwoPhaseParams(eps_reg=0.0)


class TestFractionalFlow:
    """Test f and f'"""

    def test_symmetric_point(self, quadratic: PermeabilityPair) -> None:
        assert fractional_flow(0.5, quadratic, TwoPhaseParams()) == pytest.approx(0.5)

    def test_endpoints(self, quadratic: PermeabilityPair) -> None:
        params = TwoPhaseParams(q=2.5)
        np.testing.assert_allclose(fractional_flow(np.array([0.0, 1.0]), quadratic, params), [0.0, 2.5])

    def test_below_water_residual(self) -> None:
        """Water is immobile below s_w"""
        perm = residual_permeability(0.2, 0.8)
        assert fractional_flow(0.1, perm, TwoPhaseParams()) == 0.0

    def test_derivative_peaks_at_half(self, quadratic: PermeabilityPair) -> None:
        """f' of the quadratic law peaks at 2 in s = 1/2"""
        s = np.linspace(0.0, 1.0, 1001)
        df = fractional_flow_derivative(s, quadratic, TwoPhaseParams())
        assert df.max() == pytest.approx(2.0, rel=1e-12)
        assert s[np.argmax(df)] == pytest.approx(0.5)

    def test_finite_difference_fallback(self, quadratic: PermeabilityPair) -> None:
        """Mobilities without derivatives fall back to central differences"""
        bare = PermeabilityPair(lambda_w=quadratic.lambda_w, lambda_o=quadratic.lambda_o, label="bare")
        s = np.array([0.2, 0.5, 0.9])
        params = TwoPhaseParams()
        np.testing.assert_allclose(
            fractional_flow_derivative(s, bare, params),
            fractional_flow_derivative(s, quadratic, params),
            rtol=1e-6,
        )

    def test_vanishing_mobilities_use_left_limit(self, caplog: pytest.LogCaptureFixture) -> None:
        """Where both phases are immobile the flux takes its left limit and warns"""
        stuck = PermeabilityPair(
            lambda_w=lambda s: np.where(s > 0.6, ((s - 0.6) / 0.4) ** 2, 0.0),
            lambda_o=lambda s: np.where(s < 0.4, ((0.4 - s) / 0.4) ** 2, 0.0),
            label="stuck",
        )
        with caplog.at_level(logging.WARNING, logger="stochdiff.models.two_phase"):
            value = fractional_flow(np.array([0.5]), stuck, TwoPhaseParams())
        assert value[0] == 0.0
        assert "both mobilities vanish" in caplog.text


class TestPermeabilities:
    """Test mobility pairs"""

    def test_residual_law_endpoints(self) -> None:
        perm = residual_permeability(0.1, 0.9)
        s = np.array([0.0, 0.05, 0.95, 1.0])
        np.testing.assert_allclose(perm.lambda_w(s), [0.0, 0.0, (0.85 / 0.9) ** 2, 1.0])
        np.testing.assert_allclose(perm.lambda_o(s), [1.0, (1 - 0.05 / 0.9) ** 2, 0.0, 0.0])

    def test_residual_law_rejects_disordered_saturations(self) -> None:
        with pytest.raises(ValueError):
            residual_permeability(0.7, 0.6)

    def test_power_law_rejects_small_exponent(self) -> None:
        with pytest.raises(ValueError):
            power_law_permeability(0.5)

    def test_rejects_non_monotone_mobility(self) -> None:
        with pytest.raises(FluxConstructionError):
            PermeabilityPair(lambda_w=lambda s: np.sin(np.pi * s), lambda_o=lambda s: 1 - s, label="bad")


class TestBuildFluxModel:
    """Test the flux model of the saturation equation"""

    @pytest.fixture(scope="class")
    def model(self):
        """Quadratic mobilities on the full unit interval"""
        return build_flux_model(power_law_permeability(2.0), TwoPhaseParams(), (0.0, 1.0))

    def test_primitive_starts_at_zero_and_increases(self, model) -> None:
        s = np.linspace(0.0, 1.0, 501)
        A = model.A(s)
        assert A[0] == 0.0
        assert np.all(np.diff(A) >= 0)

    def test_primitive_matches_trapezoid_oracle(self, model) -> None:
        """A(1) against a brute-force 10⁶-panel trapezoid rule"""
        s = np.linspace(0.0, 1.0, 1_000_001)
        oracle = trapezoid(diffusion_coefficient(s, power_law_permeability(2.0), TwoPhaseParams()), s)
        assert float(model.A(np.float64(1.0))) == pytest.approx(oracle, abs=1e-8)

    def test_primitive_derivative_matches_diffusion(self, two_phase_model) -> None:
        """Central differences of the tabulated A reproduce a(s) inside the state interval"""
        rng = np.random.default_rng(11)
        s = rng.uniform(0.11, 0.79, 100)
        h = 1e-5
        slope = (two_phase_model.A(s + h) - two_phase_model.A(s - h)) / (2 * h)
        np.testing.assert_allclose(slope, two_phase_model.dA(s), rtol=0, atol=1e-6)

    def test_offset_for_interior_interval(self, two_phase_model) -> None:
        """A on [0.1, 0.8] still measures the integral from 0"""
        s = np.linspace(0.0, 0.1, 100_001)
        oracle = trapezoid(diffusion_coefficient(s, power_law_permeability(2.0), TwoPhaseParams()), s)
        assert float(two_phase_model.A(np.float64(0.1))) == pytest.approx(oracle, abs=1e-9)

    def test_parameters_are_recorded(self, two_phase_model) -> None:
        assert two_phase_model.parameters["p"] == 2.0
        assert two_phase_model.parameters["nu"] == 0.01
        assert (two_phase_model.m_minus, two_phase_model.m_plus) == (0.1, 0.8)
