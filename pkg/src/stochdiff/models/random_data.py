"""
Random data models: laws over (u0, f, A) and seeded draws from them
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from stochdiff.flux import FluxModel
from stochdiff.sampling.streams import SeedStream, uniform

from .initial_data import InitialData, InitialDataKind, initial_data
from .two_phase import (
    PermeabilityPair,
    TwoPhaseParams,
    build_flux_model,
    power_law_permeability,
    residual_permeability,
)

logger = logging.getLogger(__name__)

ModelKind = Literal["random_exponent", "random_residual", "deterministic"]


class ParameterRange(NamedTuple):
    """Support [low, high] of one uniformly distributed parameter"""

    name: str
    low: float
    high: float


@dataclass(frozen=True, eq=False)
class DataSample:
    """One draw of the random data"""

    initial: InitialData
    flux: FluxModel
    parameters: dict[str, float] = field(default_factory=dict)


class RandomDataModel(BaseModel):
    """
    Law of the random data.

    random_exponent draws p ~ 𝒰(exponent_range) for power-law mobilities;
    random_residual draws independent s_w ~ 𝒰(sw_range) and s_o ~ 𝒰(so_range)
    for residual-saturation mobilities; deterministic always uses the power
    law with deterministic_exponent.
    """

    model_config = ConfigDict(frozen=True)

    kind: ModelKind = Field(default="random_exponent", description="Which law the mobilities are drawn from")
    params: TwoPhaseParams = Field(default_factory=TwoPhaseParams, description="Physical constants")
    initial_data: InitialDataKind = Field(default="riemann_u02", description="Deterministic initial datum")
    exponent_range: tuple[float, float] = Field(default=(1.5, 2.5), description="Support of the exponent p")
    sw_range: tuple[float, float] = Field(default=(0.05, 0.35), description="Support of the water residual s_w")
    so_range: tuple[float, float] = Field(default=(0.6, 0.95), description="Support of the oil residual s_o")
    deterministic_exponent: float = Field(default=2.0, ge=1.0, description="Exponent of the deterministic kind")

    @field_validator("exponent_range", "sw_range", "so_range")
    @classmethod
    def validate_range(cls, v: tuple[float, float]) -> tuple[float, float]:
        """Ranges must be nonempty"""
        if not v[0] < v[1]:
            raise ValueError(f"Range must satisfy low < high, got {v}")
        return v

    @model_validator(mode="after")
    def validate_supports(self) -> RandomDataModel:
        """Exponents stay ≥ 1 and residual saturations stay ordered inside (0, 1)"""
        if self.exponent_range[0] < 1.0:
            raise ValueError(f"exponent_range must lie in [1, ∞), got {self.exponent_range}")
        if not (0 < self.sw_range[0] and self.sw_range[1] < self.so_range[0] and self.so_range[1] < 1):
            raise ValueError(f"Residual ranges must satisfy 0 < s_w < s_o < 1, got {self.sw_range}, {self.so_range}")
        return self

    @property
    def initial(self) -> InitialData:
        return initial_data(self.initial_data)

    def parameter_box(self) -> list[ParameterRange]:
        """Uniform parameter supports, in draw order"""
        if self.kind == "random_exponent":
            return [ParameterRange("p", *self.exponent_range)]
        if self.kind == "random_residual":
            return [ParameterRange("s_w", *self.sw_range), ParameterRange("s_o", *self.so_range)]
        return []

    @property
    def parameter_dimension(self) -> int:
        return len(self.parameter_box())

    def permeability(self, values: Sequence[float]) -> PermeabilityPair:
        """Mobility pair for explicit parameter values (in parameter_box order)"""
        if len(values) != self.parameter_dimension:
            raise ValueError(f"{self.kind} takes {self.parameter_dimension} parameters, got {len(values)}")
        if self.kind == "random_exponent":
            return power_law_permeability(values[0])
        if self.kind == "random_residual":
            return residual_permeability(values[0], values[1])
        return power_law_permeability(self.deterministic_exponent)

    def sample_at(self, values: Sequence[float]) -> DataSample:
        """Data sample for explicit parameter values"""
        data = self.initial
        drawn = {box.name: float(value) for box, value in zip(self.parameter_box(), values, strict=True)}
        if self.kind == "deterministic":
            drawn = {"p": self.deterministic_exponent}
        flux = build_flux_model(self.permeability(values), self.params, data.state_range, extra_parameters=drawn)
        return DataSample(initial=data, flux=flux, parameters=drawn)

    def draw_parameters(self, stream: SeedStream) -> tuple[float, ...]:
        """Draw the random parameters from stream, one variate per parameter"""
        return tuple(uniform(stream, box.low, box.high) for box in self.parameter_box())

    def descriptor(self, drawn: Mapping[str, float] | None = None) -> str:
        """key=value text block for output headers"""
        items = [
            f"kind={self.kind}",
            f"initial_data={self.initial_data}",
            f"q={self.params.q!r}",
            f"k_bar={self.params.k_bar!r}",
            f"nu={self.params.nu!r}",
            f"eps_reg={self.params.eps_reg!r}",
        ]
        items.extend(f"{box.name}_range=[{box.low!r},{box.high!r}]" for box in self.parameter_box())
        if self.kind == "deterministic":
            items.append(f"p={self.deterministic_exponent!r}")
        items.extend(f"{key}={value!r}" for key, value in (drawn or {}).items())
        return " ".join(items)


def draw_sample(model: RandomDataModel, stream: SeedStream) -> DataSample:
    """
    One draw (u0, f, A) of the random data.

    The sample is a pure function of the stream key: the same key always
    yields the same parameters and hence identical flux tables.
    """
    values = model.draw_parameters(stream)
    sample = model.sample_at(values)
    logger.debug(f"Drew {sample.parameters} from stream {stream.key}")
    return sample
