"""
Monotone numerical fluxes in split form F(u, v) = f1(u) + f2(v)

f1 is nondecreasing and f2 nonincreasing on the state interval, and
f1 + f2 = f. The Engquist–Osher splitting is tabulated once per flux model on a
uniform table of the state interval; Lax–Friedrichs and upwind splittings are
closed-form.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad
from scipy.optimize import brentq

from stochdiff.core.quadrature import cumulative_integral
from stochdiff.errors import FluxConstructionError, QuadratureError

from .model import FluxModel, ScalarFunction

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

TABLE_POINTS = 4097
QUADRATURE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class NumericalFlux:
    """Split numerical flux with exact derivatives of both parts"""

    f1: ScalarFunction
    f2: ScalarFunction
    df1: ScalarFunction
    df2: ScalarFunction
    label: str
    m_minus: float
    m_plus: float

    def __call__(self, u: npt.ArrayLike, v: npt.ArrayLike) -> FloatArray:
        result: FloatArray = np.asarray(self.f1(np.asarray(u, dtype=np.float64))) + np.asarray(
            self.f2(np.asarray(v, dtype=np.float64))
        )
        return result


def flux_eval(F: NumericalFlux, u: float, v: float) -> float:
    """F(u, v) = f1(u) + f2(v) for a single interface"""
    return float(F(np.float64(u), np.float64(v)))


def check_splitting(F: NumericalFlux, model: FluxModel, *, consistency_tol: float = 1e-10) -> None:
    """
    Verify consistency f1 + f2 = f and monotonicity of both parts on the probe grid.

    Raises:
        FluxConstructionError: if either property fails
    """
    probe = model.probe
    f = np.asarray(model.f(probe), dtype=np.float64)
    f1 = np.asarray(F.f1(probe), dtype=np.float64)
    f2 = np.asarray(F.f2(probe), dtype=np.float64)
    defect = np.abs(f1 + f2 - f)
    if np.any(defect > consistency_tol * np.maximum(1.0, np.abs(f))):
        worst = int(np.argmax(defect))
        raise FluxConstructionError(
            f"{F.label}: f1 + f2 differs from f by {defect[worst]:.3e} at s={probe[worst]:.6g}"
        )
    scale = 1e-12 * max(1.0, float(np.max(np.abs(f1))), float(np.max(np.abs(f2))))
    if np.any(np.diff(f1) < -scale):
        raise FluxConstructionError(f"{F.label}: f1 is not nondecreasing")
    if np.any(np.diff(f2) > scale):
        raise FluxConstructionError(f"{F.label}: f2 is not nonincreasing")


def _positive_part(df: ScalarFunction) -> Callable[[FloatArray], FloatArray]:
    return lambda s: np.maximum(np.asarray(df(s), dtype=np.float64), 0.0)


def _negative_part(df: ScalarFunction) -> Callable[[FloatArray], FloatArray]:
    return lambda s: np.minimum(np.asarray(df(s), dtype=np.float64), 0.0)


@dataclass(frozen=True, eq=False)
class _SplitTable:
    """
    Engquist–Osher splitting tabulated on nodes x_k.

    w_plus[k] = ∫_{M₋}^{x_k} max(f', 0) and w_minus[k] = ∫_{M₋}^{x_k} min(f', 0).
    Inside table cell k, f' keeps one sign on [inc_lo, inc_hi] (f increasing)
    and on [dec_lo, dec_hi] (f decreasing); the split parts follow f exactly
    there, so the tabulated flux stays monotone and consistent.
    """

    f: ScalarFunction
    f_minus: float
    nodes: FloatArray
    w_plus: FloatArray
    w_minus: FloatArray
    inc_lo: FloatArray
    inc_hi: FloatArray
    dec_lo: FloatArray
    dec_hi: FloatArray

    def _cell(self, u: FloatArray) -> npt.NDArray[np.intp]:
        return np.clip(np.searchsorted(self.nodes, u, side="right") - 1, 0, self.nodes.shape[0] - 2)

    def f1(self, u: FloatArray) -> FloatArray:
        u = np.asarray(u, dtype=np.float64)
        k = self._cell(u)
        lo = self.inc_lo[k]
        return self.f_minus + self.w_plus[k] + (self.f(np.clip(u, lo, self.inc_hi[k])) - self.f(lo))

    def f2(self, u: FloatArray) -> FloatArray:
        u = np.asarray(u, dtype=np.float64)
        k = self._cell(u)
        lo = self.dec_lo[k]
        return self.w_minus[k] + (self.f(np.clip(u, lo, self.dec_hi[k])) - self.f(lo))


def _build_table(model: FluxModel, points: int) -> _SplitTable:
    nodes = np.linspace(model.m_minus, model.m_plus, points)
    try:
        w_plus = cumulative_integral(_positive_part(model.df), nodes, tol=QUADRATURE_TOL)
        w_minus = cumulative_integral(_negative_part(model.df), nodes, tol=QUADRATURE_TOL)
    except QuadratureError as e:
        raise FluxConstructionError(f"{model.label}: Engquist–Osher tabulation failed: {e}") from e

    slope = np.asarray(model.df(nodes), dtype=np.float64)
    left, right = nodes[:-1], nodes[1:]
    rising = (slope[:-1] >= 0) & (slope[1:] >= 0)
    inc_lo = np.where(rising, left, right)
    inc_hi = right.copy()
    dec_lo = np.where(rising, right, left)
    dec_hi = right.copy()

    # cells where f' changes sign get split at the root
    changes = np.flatnonzero(slope[:-1] * slope[1:] < 0)
    for k in changes:
        root = float(brentq(lambda s: float(model.df(np.float64(s))), left[k], right[k], xtol=1e-15))
        if slope[k] > 0:
            inc_lo[k], inc_hi[k], dec_lo[k], dec_hi[k] = left[k], root, root, right[k]
        else:
            dec_lo[k], dec_hi[k], inc_lo[k], inc_hi[k] = left[k], root, root, right[k]

    logger.debug(f"{model.label}: Engquist–Osher table with {points} nodes, {changes.size} sign changes of f'")
    return _SplitTable(
        f=model.f,
        f_minus=float(model.f(np.float64(model.m_minus))),
        nodes=nodes,
        w_plus=w_plus,
        w_minus=w_minus,
        inc_lo=inc_lo,
        inc_hi=inc_hi,
        dec_lo=dec_lo,
        dec_hi=dec_hi,
    )


def _quad_integral(integrand: Callable[[float], float], lo: float, hi: float) -> float:
    if hi == lo:
        return 0.0
    result = quad(integrand, lo, hi, epsabs=QUADRATURE_TOL, epsrel=0.0, limit=200, full_output=1)
    if len(result) > 3:
        raise FluxConstructionError(f"Adaptive quadrature failed on [{lo}, {hi}]: {result[3]}")
    return float(result[0])


def _direct_parts(model: FluxModel) -> tuple[ScalarFunction, ScalarFunction]:
    """Engquist–Osher parts by one adaptive quadrature per evaluation point"""
    f_minus = float(model.f(np.float64(model.m_minus)))

    def plus(s: float) -> float:
        return max(float(model.df(np.float64(s))), 0.0)

    def minus(s: float) -> float:
        return min(float(model.df(np.float64(s))), 0.0)

    integrate_plus = np.vectorize(lambda u: f_minus + _quad_integral(plus, model.m_minus, float(u)), otypes=[float])
    integrate_minus = np.vectorize(lambda u: _quad_integral(minus, model.m_minus, float(u)), otypes=[float])
    return integrate_plus, integrate_minus


def engquist_osher(model: FluxModel, *, tabulated: bool = True, table_points: int = TABLE_POINTS) -> NumericalFlux:
    """
    Engquist–Osher flux f1(u) = f(M₋) + ∫_{M₋}^u max(f', 0), f2(v) = ∫_{M₋}^v min(f', 0).

    Args:
        model: Flux realization
        tabulated: Precompute the integrals on a uniform table (default) or
            integrate directly at every evaluation, for validation
        table_points: Number of table nodes over [M₋, M₊]

    Raises:
        FluxConstructionError: if quadrature fails or the splitting checks fail
    """
    if tabulated:
        table = _build_table(model, table_points)
        f1: ScalarFunction = table.f1
        f2: ScalarFunction = table.f2
    else:
        f1, f2 = _direct_parts(model)

    flux = NumericalFlux(
        f1=f1,
        f2=f2,
        df1=_positive_part(model.df),
        df2=_negative_part(model.df),
        label="engquist_osher" if tabulated else "engquist_osher_direct",
        m_minus=model.m_minus,
        m_plus=model.m_plus,
    )
    # each direct part carries its own quadrature error
    check_splitting(flux, model, consistency_tol=1e-10 if tabulated else 1e-9)
    return flux


def lax_friedrichs(model: FluxModel, theta: float) -> NumericalFlux:
    """
    Lax–Friedrichs flux for the mesh ratio theta = Δt/Δx it will be used with.

    f1(u) = f(u)/2 + u/(2θ), f2(v) = f(v)/2 − v/(2θ).

    Raises:
        FluxConstructionError: if theta is not positive or theta·lip_f > 1
    """
    if theta <= 0:
        raise FluxConstructionError(f"Lax–Friedrichs theta must be positive, got {theta}")
    if theta * model.lip_f > 1.0 + 1e-12:
        raise FluxConstructionError(
            f"{model.label}: Lax–Friedrichs with theta={theta} is not monotone for lip_f={model.lip_f:.6g}"
        )

    inv = 0.5 / theta
    flux = NumericalFlux(
        f1=lambda u: 0.5 * np.asarray(model.f(u)) + inv * u,
        f2=lambda v: 0.5 * np.asarray(model.f(v)) - inv * v,
        df1=lambda u: 0.5 * np.asarray(model.df(u)) + inv,
        df2=lambda v: 0.5 * np.asarray(model.df(v)) - inv,
        label="lax_friedrichs",
        m_minus=model.m_minus,
        m_plus=model.m_plus,
    )
    check_splitting(flux, model)
    return flux


def upwind(model: FluxModel) -> NumericalFlux:
    """
    Upwind flux for a flux that is monotone on the state interval.

    Raises:
        FluxConstructionError: if f changes monotonicity on the probe grid
    """
    slope = np.asarray(model.df(model.probe), dtype=np.float64)

    def zero(s: FloatArray) -> FloatArray:
        return np.zeros_like(np.asarray(s, dtype=np.float64))

    if np.all(slope >= 0):
        f1, f2, df1, df2 = model.f, zero, model.df, zero
    elif np.all(slope <= 0):
        f1, f2, df1, df2 = zero, model.f, zero, model.df
    else:
        raise FluxConstructionError(f"{model.label}: upwind flux needs a monotone f")

    flux = NumericalFlux(f1=f1, f2=f2, df1=df1, df2=df2, label="upwind", m_minus=model.m_minus, m_plus=model.m_plus)
    check_splitting(flux, model)
    return flux
