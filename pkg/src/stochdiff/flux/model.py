"""
Flux model - one realization of the convective and diffusive fluxes
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from stochdiff.errors import FluxConstructionError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
ScalarFunction = Callable[[FloatArray], FloatArray]

PROBE_POINTS = 101


def probe_grid(m_minus: float, m_plus: float, points: int = PROBE_POINTS) -> FloatArray:
    """Uniform probe of the state interval used for all structural checks"""
    return np.linspace(m_minus, m_plus, points)


def _slack(scale: float) -> float:
    return 1e-9 * max(1.0, scale)


@dataclass(frozen=True, eq=False)
class FluxModel:
    """
    Convective flux f and diffusive primitive A on the admissible interval [M₋, M₊].

    All four callables are vectorized: they take and return float arrays.
    A' = a must be nonnegative; the equation degenerates where it vanishes.
    """

    f: ScalarFunction
    df: ScalarFunction
    A: ScalarFunction
    dA: ScalarFunction
    m_minus: float
    m_plus: float
    lip_f: float
    lip_a: float
    label: str = "flux"
    parameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (np.isfinite(self.m_minus) and np.isfinite(self.m_plus)) or self.m_plus <= self.m_minus:
            raise FluxConstructionError(f"Invalid state interval [{self.m_minus}, {self.m_plus}]")
        if self.lip_f < 0 or self.lip_a < 0:
            raise FluxConstructionError("Lipschitz bounds must be nonnegative")
        self.validate()

    @classmethod
    def from_functions(
        cls,
        f: ScalarFunction,
        df: ScalarFunction,
        A: ScalarFunction,
        dA: ScalarFunction,
        m_minus: float,
        m_plus: float,
        *,
        label: str = "flux",
        parameters: Mapping[str, Any] | None = None,
    ) -> FluxModel:
        """Build a model with Lipschitz bounds taken from the probe grid"""
        probe = probe_grid(m_minus, m_plus)
        lip_f = float(np.max(np.abs(_eval(df, probe))))
        lip_a = float(np.max(_eval(dA, probe)))
        return cls(
            f=f,
            df=df,
            A=A,
            dA=dA,
            m_minus=float(m_minus),
            m_plus=float(m_plus),
            lip_f=lip_f,
            lip_a=max(lip_a, 0.0),
            label=label,
            parameters=dict(parameters or {}),
        )

    @property
    def probe(self) -> FloatArray:
        return probe_grid(self.m_minus, self.m_plus)

    @property
    def state_interval(self) -> tuple[float, float]:
        return (self.m_minus, self.m_plus)

    def validate(self) -> None:
        """
        Check a ≥ 0, the Lipschitz bounds and monotonicity of A on the probe grid.

        Raises:
            FluxConstructionError: on the first violated assumption
        """
        probe = self.probe
        df = _eval(self.df, probe)
        a = _eval(self.dA, probe)
        A = _eval(self.A, probe)
        if not (np.all(np.isfinite(df)) and np.all(np.isfinite(a)) and np.all(np.isfinite(A))):
            raise FluxConstructionError(f"{self.label}: flux functions are not finite on the state interval")
        if np.any(a < -_slack(self.lip_a)):
            raise FluxConstructionError(f"{self.label}: diffusion A' is negative at s={probe[np.argmin(a)]:.6g}")
        if np.any(np.abs(df) > self.lip_f + _slack(self.lip_f)):
            raise FluxConstructionError(f"{self.label}: |f'| exceeds lip_f={self.lip_f:.6g}")
        if np.any(a > self.lip_a + _slack(self.lip_a)):
            raise FluxConstructionError(f"{self.label}: A' exceeds lip_a={self.lip_a:.6g}")
        if np.any(np.diff(A) < -_slack(float(np.max(np.abs(A))))):
            raise FluxConstructionError(f"{self.label}: diffusive primitive A is not nondecreasing")

    def describe(self) -> str:
        """key=value summary for output headers"""
        items = [f"label={self.label}", f"m_minus={self.m_minus!r}", f"m_plus={self.m_plus!r}"]
        items.extend(f"{key}={value!r}" for key, value in self.parameters.items())
        return " ".join(items)


def _eval(func: ScalarFunction, x: FloatArray) -> FloatArray:
    return np.broadcast_to(np.asarray(func(x), dtype=np.float64), x.shape)
