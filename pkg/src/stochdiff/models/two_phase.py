"""
Two-phase flow closures: phase mobilities, capillary pressure, fractional flow
and capillary diffusion, and the flux model they induce for the water
saturation equation
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.interpolate import PchipInterpolator

from stochdiff.core.quadrature import cumulative_integral, panel_integrals
from stochdiff.errors import FluxConstructionError, QuadratureError
from stochdiff.flux import FluxModel, probe_grid

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Mobility = Callable[[FloatArray], FloatArray]

TABLE_POINTS = 4097
FD_STEP = 1e-7


class TwoPhaseParams(BaseModel):
    """Physical constants of the fractional flow and capillary diffusion"""

    model_config = ConfigDict(frozen=True)

    q: float = Field(default=1.0, description="Total flow rate")
    k_bar: float = Field(default=1.0, gt=0, description="Rock permeability")
    nu: float = Field(default=0.01, gt=0, description="Capillary pressure scaling")
    eps_reg: float = Field(default=1e-9, description="Endpoint clamp for evaluating p_c'")

    @field_validator("eps_reg")
    @classmethod
    def validate_eps_reg(cls, v: float) -> float:
        """Clamp must sit strictly inside (0, 1e-3)"""
        if not 0 < v < 1e-3:
            raise ValueError(f"eps_reg must lie in (0, 1e-3), got {v}")
        return v


@dataclass(frozen=True, eq=False)
class PermeabilityPair:
    """Water and oil mobilities λ^w, λ^o with optional analytic derivatives"""

    lambda_w: Mobility
    lambda_o: Mobility
    label: str
    dlambda_w: Mobility | None = None
    dlambda_o: Mobility | None = None
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        s = probe_grid(0.0, 1.0)
        lw = np.asarray(self.lambda_w(s), dtype=np.float64)
        lo = np.asarray(self.lambda_o(s), dtype=np.float64)
        if np.any(np.diff(lw) < -1e-12) or np.any(np.diff(lo) > 1e-12):
            raise FluxConstructionError(f"{self.label}: λ^w must be nondecreasing and λ^o nonincreasing on [0, 1]")
        if abs(lw[0]) > 1e-12 or abs(lw[-1] - 1) > 1e-12 or abs(lo[0] - 1) > 1e-12 or abs(lo[-1]) > 1e-12:
            raise FluxConstructionError(f"{self.label}: mobilities violate λ^w(0)=0, λ^w(1)=1, λ^o(0)=1, λ^o(1)=0")

    @property
    def has_derivatives(self) -> bool:
        return self.dlambda_w is not None and self.dlambda_o is not None


def power_law_permeability(p: float) -> PermeabilityPair:
    """λ^w = |s|^p, λ^o = |1 − s|^p"""
    if p < 1:
        raise ValueError(f"Exponent must be at least 1, got {p}")

    def lambda_w(s: FloatArray) -> FloatArray:
        return np.abs(s) ** p

    def lambda_o(s: FloatArray) -> FloatArray:
        return np.abs(1.0 - s) ** p

    def dlambda_w(s: FloatArray) -> FloatArray:
        return p * np.abs(s) ** (p - 1) * np.sign(s)

    def dlambda_o(s: FloatArray) -> FloatArray:
        return -p * np.abs(1.0 - s) ** (p - 1) * np.sign(1.0 - s)

    return PermeabilityPair(
        lambda_w=lambda_w,
        lambda_o=lambda_o,
        dlambda_w=dlambda_w,
        dlambda_o=dlambda_o,
        label=f"power_law(p={p:.6g})",
        parameters={"p": float(p)},
    )


def residual_permeability(s_w: float, s_o: float) -> PermeabilityPair:
    """
    Mobilities with residual saturations: water is immobile below s_w and oil
    above s_o.
    """
    if not 0 < s_w < s_o < 1:
        raise ValueError(f"Residual saturations need 0 < s_w < s_o < 1, got s_w={s_w}, s_o={s_o}")
    scale = (1.0 - s_w) ** 2

    def lambda_w(s: FloatArray) -> FloatArray:
        return np.where(s > s_w, (s - s_w) ** 2 / scale, 0.0)

    def lambda_o(s: FloatArray) -> FloatArray:
        return np.where(s <= s_o, (1.0 - s / s_o) ** 2, 0.0)

    def dlambda_w(s: FloatArray) -> FloatArray:
        return np.where(s > s_w, 2.0 * (s - s_w) / scale, 0.0)

    def dlambda_o(s: FloatArray) -> FloatArray:
        return np.where(s <= s_o, -2.0 * (1.0 - s / s_o) / s_o, 0.0)

    return PermeabilityPair(
        lambda_w=lambda_w,
        lambda_o=lambda_o,
        dlambda_w=dlambda_w,
        dlambda_o=dlambda_o,
        label=f"residual(s_w={s_w:.6g}, s_o={s_o:.6g})",
        parameters={"s_w": float(s_w), "s_o": float(s_o)},
    )


def capillary_pressure(s: npt.ArrayLike) -> FloatArray:
    """
    p_c(s) = −(s^{−4/3} − 1)^{1/4}

    Raises:
        ValueError: for saturations outside (0, 1]
    """
    s = np.asarray(s, dtype=np.float64)
    if np.any(s <= 0) or np.any(s > 1):
        raise ValueError("Capillary pressure is defined for saturations in (0, 1] only")
    return -((s ** (-4.0 / 3.0) - 1.0) ** 0.25)


def capillary_pressure_derivative(s: npt.ArrayLike) -> FloatArray:
    """p_c'(s) = (1/3)·s^{−7/3}·(s^{−4/3} − 1)^{−3/4} for s in (0, 1)"""
    s = np.asarray(s, dtype=np.float64)
    return (1.0 / 3.0) * s ** (-7.0 / 3.0) * (s ** (-4.0 / 3.0) - 1.0) ** (-0.75)


def _total_mobility(s: FloatArray, perm: PermeabilityPair) -> tuple[FloatArray, FloatArray, FloatArray]:
    lw = np.asarray(perm.lambda_w(s), dtype=np.float64)
    lo = np.asarray(perm.lambda_o(s), dtype=np.float64)
    return lw, lo, lw + lo


def diffusion_coefficient(s: npt.ArrayLike, perm: PermeabilityPair, params: TwoPhaseParams) -> FloatArray:
    """
    a(s) = ν·K̄·λ^wλ^o/(λ^w + λ^o)·p_c'(s), extended by zero outside (0, 1).

    p_c' is evaluated at s clamped to [eps_reg, 1 − eps_reg]; the mobility
    factor uses s itself, so a stays continuous and vanishes at both ends.
    """
    s = np.asarray(s, dtype=np.float64)
    lw, lo, total = _total_mobility(s, perm)
    mobility = np.divide(lw * lo, total, out=np.zeros_like(s), where=total > 0)
    clamped = np.clip(s, params.eps_reg, 1.0 - params.eps_reg)
    a = params.nu * params.k_bar * mobility * capillary_pressure_derivative(clamped)
    return np.where((s > 0) & (s < 1), a, 0.0)


def fractional_flow(s: npt.ArrayLike, perm: PermeabilityPair, params: TwoPhaseParams) -> FloatArray:
    """
    f(s) = q·λ^w/(λ^w + λ^o)

    Where both mobilities vanish the value just left of s is used instead and
    a warning is logged.
    """
    s = np.asarray(s, dtype=np.float64)
    lw, _, total = _total_mobility(s, perm)
    degenerate = total <= 0
    result = params.q * np.divide(lw, total, out=np.zeros_like(s), where=~degenerate)
    if np.any(degenerate):
        count = np.count_nonzero(degenerate)
        logger.warning(f"{perm.label}: both mobilities vanish at {count} states; using left limits")
        left = s[degenerate] - 1e-9
        lw_left, _, total_left = _total_mobility(left, perm)
        result[degenerate] = params.q * np.divide(lw_left, total_left, out=np.zeros_like(left), where=total_left > 0)
    return result


def fractional_flow_derivative(s: npt.ArrayLike, perm: PermeabilityPair, params: TwoPhaseParams) -> FloatArray:
    """f'(s), analytic when the mobilities carry derivatives, else central differences"""
    s = np.asarray(s, dtype=np.float64)
    if perm.dlambda_w is None or perm.dlambda_o is None:
        return (fractional_flow(s + FD_STEP, perm, params) - fractional_flow(s - FD_STEP, perm, params)) / (2 * FD_STEP)
    lw, lo, total = _total_mobility(s, perm)
    dlw = np.asarray(perm.dlambda_w(s), dtype=np.float64)
    dlo = np.asarray(perm.dlambda_o(s), dtype=np.float64)
    numerator = dlw * lo - lw * dlo
    return params.q * np.divide(numerator, total**2, out=np.zeros_like(s), where=total > 0)


def build_flux_model(
    perm: PermeabilityPair,
    params: TwoPhaseParams,
    state_interval: tuple[float, float] = (0.0, 1.0),
    *,
    table_points: int = TABLE_POINTS,
    extra_parameters: Mapping[str, Any] | None = None,
) -> FluxModel:
    """
    Flux model of the saturation equation for one mobility pair.

    A(s) = ∫₀^s a(r) dr is tabulated over the state interval by adaptive
    quadrature and interpolated with a monotone cubic, so A stays
    nondecreasing. dA is the exact a.

    Raises:
        FluxConstructionError: if the quadrature for A fails
    """
    m_minus, m_plus = state_interval

    def f(s: FloatArray) -> FloatArray:
        return fractional_flow(s, perm, params)

    def df(s: FloatArray) -> FloatArray:
        return fractional_flow_derivative(s, perm, params)

    def a(s: FloatArray) -> FloatArray:
        return diffusion_coefficient(s, perm, params)

    nodes = np.linspace(m_minus, m_plus, table_points)
    try:
        offset = float(panel_integrals(a, 0.0, m_minus)[0]) if m_minus != 0 else 0.0
        table = cumulative_integral(a, nodes, offset=offset)
    except QuadratureError as e:
        raise FluxConstructionError(f"{perm.label}: diffusive primitive A could not be tabulated: {e}") from e

    primitive = PchipInterpolator(nodes, table, extrapolate=True)

    def A(s: FloatArray) -> FloatArray:
        return np.asarray(primitive(s), dtype=np.float64)

    parameters: dict[str, Any] = {"mobility": perm.label, **perm.parameters, "nu": params.nu, "q": params.q}
    parameters.update(extra_parameters or {})
    return FluxModel.from_functions(f, df, A, a, m_minus, m_plus, label=perm.label, parameters=parameters)
