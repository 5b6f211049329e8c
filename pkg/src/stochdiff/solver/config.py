"""
Scheme configuration and work accounting
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

SchemeKind = Literal["explicit", "implicit"]


class SchemeConfig(BaseModel):
    """
    Time stepping constants.

    Explicit runs take Δt from the CFL condition scaled by cfl; implicit runs
    take Δt = theta·Δx and iterate Newton until the scaled ℓ¹ residual falls
    below newton_tol_factor·Δx·Δt.
    """

    model_config = ConfigDict(frozen=True)

    kind: SchemeKind = Field(default="explicit", description="Explicit or implicit scheme")
    cfl: float = Field(default=0.4, gt=0, le=1, description="Safety factor of the explicit CFL condition")
    theta: float = Field(default=1.0, gt=0, description="Implicit mesh ratio Δt/Δx")
    newton_tol_factor: float = Field(default=1.0, gt=0, description="Newton residual target in units of Δx·Δt")
    newton_max_iter: int = Field(default=50, ge=1, description="Newton iteration cap per step")
    strict_rate_cfl: bool = Field(default=False, description="Also enforce Δt ≤ cfl·Δx^{8/3}")
    tabulated_flux: bool = Field(default=True, description="Tabulate the Engquist–Osher integrals")

    @classmethod
    def explicit(cls, **kwargs: object) -> SchemeConfig:
        """Convenience constructor for the explicit scheme"""
        return cls(kind="explicit", **kwargs)  # type: ignore[arg-type]

    @classmethod
    def implicit(cls, **kwargs: object) -> SchemeConfig:
        """Convenience constructor for the implicit scheme"""
        return cls(kind="implicit", **kwargs)  # type: ignore[arg-type]

    def describe(self) -> str:
        """key=value text for output headers"""
        return " ".join(f"{key}={value!r}" for key, value in self.model_dump().items())


@dataclass
class WorkCounter:
    """Machine-independent work of one or more runs, plus wall time"""

    flux_evals: int = 0
    cell_updates: int = 0
    newton_iters: int = 0
    linear_solves: int = 0
    steps: int = 0
    wall_seconds: float = 0.0

    def add(self, other: WorkCounter) -> WorkCounter:
        """Accumulate another counter into this one"""
        self.flux_evals += other.flux_evals
        self.cell_updates += other.cell_updates
        self.newton_iters += other.newton_iters
        self.linear_solves += other.linear_solves
        self.steps += other.steps
        self.wall_seconds += other.wall_seconds
        return self

    @classmethod
    def total(cls, counters: list[WorkCounter]) -> WorkCounter:
        result = cls()
        for counter in counters:
            result.add(counter)
        return result

    def as_dict(self) -> dict[str, float]:
        return asdict(self)
