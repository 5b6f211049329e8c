"""
Tests for fixed Gauss–Legendre rules and adaptive panel integrals
"""

import numpy as np
import pytest
from scipy.integrate import quad

from stochdiff.core.quadrature import cumulative_integral, gauss_legendre, panel_integrals
from stochdiff.errors import QuadratureError
from stochdiff.models import TwoPhaseParams, diffusion_coefficient, power_law_permeability


def test_gauss_legendre_is_exact_for_degree_nine():
    """The 5-point rule integrates x^9 exactly on every interval"""
    result = gauss_legendre(lambda x: x**9, [0.0, -1.0], [1.0, 2.0])
    np.testing.assert_allclose(result, [0.1, (2.0**10 - 1.0) / 10.0], rtol=1e-13)


def test_gauss_legendre_accepts_scalar_integrand():
    """Constant integrands may return a scalar"""
    assert gauss_legendre(lambda x: 2.0, 0.0, 3.0)[0] == pytest.approx(6.0)


def test_panel_integrals_handle_kinks():
    """|x − 1/3| has a kink the fixed rule cannot resolve"""
    exact = 0.5 * (1 / 3) ** 2 + 0.5 * (2 / 3) ** 2
    result = panel_integrals(lambda x: np.abs(x - 1 / 3), 0.0, 1.0, tol=1e-12)
    assert result[0] == pytest.approx(exact, abs=1e-11)


def test_panel_integrals_handle_degenerate_power():
    """x^{2/3} has an unbounded derivative at 0, like the capillary diffusion"""
    result = panel_integrals(lambda x: np.cbrt(x) ** 2, 0.0, 1.0, tol=1e-10)
    assert result[0] == pytest.approx(0.6, abs=1e-9)


def test_panel_integrals_of_several_panels():
    """Each panel gets its own integral"""
    result = panel_integrals(lambda x: 3.0 * x**2, [0.0, 1.0, -1.0], [1.0, 2.0, 1.0])
    np.testing.assert_allclose(result, [1.0, 7.0, 2.0], rtol=0, atol=1e-12)


def test_panel_integrals_raise_when_limit_exhausted():
    """A jump cannot settle below the tolerance on two subintervals"""
    with pytest.raises(QuadratureError):
        panel_integrals(lambda x: np.where(x < 0.3, 0.0, 1.0), 0.0, 1.0, tol=1e-14, limit=2)


def test_cumulative_integral():
    """Running integral of 2x from 0 is x², shifted by the offset"""
    nodes = np.linspace(0.0, 1.0, 11)
    table = cumulative_integral(lambda x: 2.0 * x, nodes, offset=0.5)
    np.testing.assert_allclose(table, 0.5 + nodes**2, rtol=0, atol=1e-14)


def test_cumulative_integral_of_capillary_diffusion_matches_scipy_quad():
    """The tabulated primitive of the degenerate a(s) agrees with per-node quad"""
    perm = power_law_permeability(2.0)
    params = TwoPhaseParams()

    def a(s):
        return diffusion_coefficient(np.asarray(s, dtype=np.float64), perm, params)

    nodes = np.linspace(0.0, 1.0, 4097)
    table = cumulative_integral(a, nodes)
    for k in range(512, nodes.size, 512):
        expected, _ = quad(lambda s: float(a(s)), 0.0, nodes[k], epsabs=1e-11, epsrel=0.0, limit=200)
        assert table[k] == pytest.approx(expected, abs=1e-9)
