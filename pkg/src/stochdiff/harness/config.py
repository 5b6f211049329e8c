"""
Experiment configuration: pydantic sections, INI loading and presets

A config file is flat ``key = value`` text in the sections [model], [scheme],
[hierarchy] and [run]. Key names are unique across sections so every key can
also be set by a command-line flag of the same name.
"""

from __future__ import annotations

import configparser
import logging
import re
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from stochdiff.errors import ConfigError
from stochdiff.estimators import LevelHierarchy
from stochdiff.models import InitialDataKind, ModelKind, RandomDataModel, TwoPhaseParams, initial_data
from stochdiff.solver import SchemeConfig

logger = logging.getLogger(__name__)

ReferenceKind = Literal["quadrature", "mlmc"]
PresetName = Literal["exponent", "residual", "sine"]

SECTIONS = ("model", "scheme", "hierarchy", "run")

_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(-?\d+)\s*$")


def parse_number(text: str) -> str:
    """Rewrite 'a/b' and 'b^k' literals to decimal text; other text is returned unchanged"""
    match = _POWER.match(text)
    if match:
        base, exponent = int(match.group(1)), int(match.group(2))
        return repr(float(Fraction(base) ** exponent))
    if "/" in text:
        try:
            return repr(float(Fraction(text.strip())))
        except (ValueError, ZeroDivisionError):
            return text
    return text


class ModelSection(BaseModel):
    """[model]: law of the random data and physical constants"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    distribution: ModelKind = Field(default="random_exponent", description="Law of the random mobilities")
    initial_data: InitialDataKind = Field(default="riemann_u02", description="Deterministic initial datum")
    q: float = Field(default=1.0, description="Total flow rate")
    k_bar: float = Field(default=1.0, gt=0, description="Rock permeability")
    nu: float = Field(default=0.01, gt=0, description="Capillary pressure scaling")
    eps_reg: float = Field(default=1e-9, description="Endpoint clamp for p_c'")
    p: float = Field(default=2.0, ge=1.0, description="Exponent of the deterministic distribution")
    p_min: float = Field(default=1.5, ge=1.0, description="Lower end of the random exponent")
    p_max: float = Field(default=2.5, ge=1.0, description="Upper end of the random exponent")
    sw_min: float = Field(default=0.05, description="Lower end of the water residual saturation")
    sw_max: float = Field(default=0.35, description="Upper end of the water residual saturation")
    so_min: float = Field(default=0.6, description="Lower end of the oil residual saturation")
    so_max: float = Field(default=0.95, description="Upper end of the oil residual saturation")

    @model_validator(mode="after")
    def validate_law(self) -> ModelSection:
        """Ranges and constants must form a valid data law"""
        self.random_model()
        return self

    def random_model(self) -> RandomDataModel:
        return RandomDataModel(
            kind=self.distribution,
            params=TwoPhaseParams(q=self.q, k_bar=self.k_bar, nu=self.nu, eps_reg=self.eps_reg),
            initial_data=self.initial_data,
            exponent_range=(self.p_min, self.p_max),
            sw_range=(self.sw_min, self.sw_max),
            so_range=(self.so_min, self.so_max),
            deterministic_exponent=self.p,
        )


class HierarchySection(BaseModel):
    """[hierarchy]: nested grids of the MLMC runs"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dx0: float = Field(default=0.125, gt=0, description="Coarsest cell size")
    K: int = Field(default=1, ge=1, description="Refinement exponent, 2^K cells per coarse cell")
    L_max: int = Field(default=3, ge=0, description="Finest level of the convergence table")
    m_base: int = Field(default=8, ge=1, description="Samples at the finest level")


class RunSection(BaseModel):
    """[run]: final time, seeds, reference and output"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    T: float = Field(default=0.3, gt=0, description="Final time")
    N: int = Field(default=5, ge=1, description="Estimator repetitions per table row")
    master_seed: int = Field(default=20240601, ge=0, description="Master seed of all random streams")
    reference: ReferenceKind = Field(default="quadrature", description="Reference solution kind")
    reference_nodes: int = Field(default=32, ge=1, description="Gauss–Legendre nodes per parameter")
    reference_levels: int = Field(default=2, ge=1, description="Quadrature reference refinement past L_max")
    reference_L: int | None = Field(default=None, ge=0, description="Finest level of an MLMC reference")
    reference_seed: int | None = Field(default=None, ge=0, description="Seed of an MLMC reference")
    output_dir: Path = Field(default=Path("results"), description="Directory receiving all outputs")
    workers: int | None = Field(default=None, ge=1, description="Concurrent sample solves")

    @field_validator("reference_L", "reference_seed", "workers", mode="before")
    @classmethod
    def empty_is_none(cls, v: Any) -> Any:
        """Empty INI values leave optional keys unset"""
        if isinstance(v, str) and not v.strip():
            return None
        return v


class ExperimentConfig(BaseModel):
    """All settings of one experiment"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: ModelSection = Field(default_factory=ModelSection)
    scheme: SchemeConfig = Field(default_factory=SchemeConfig)
    hierarchy: HierarchySection = Field(default_factory=HierarchySection)
    run: RunSection = Field(default_factory=RunSection)

    @model_validator(mode="after")
    def validate_reference(self) -> ExperimentConfig:
        """An MLMC reference must be finer than the finest table level"""
        if self.run.reference == "mlmc":
            level = self.reference_level
            if level <= self.hierarchy.L_max:
                raise ValueError(f"reference_L={level} must exceed L_max={self.hierarchy.L_max}")
        return self

    @property
    def reference_level(self) -> int:
        """Level of the reference grid in the hierarchy"""
        if self.run.reference == "mlmc" and self.run.reference_L is not None:
            return self.run.reference_L
        return self.hierarchy.L_max + self.run.reference_levels

    def random_model(self) -> RandomDataModel:
        return self.model.random_model()

    def level_hierarchy(self, L: int | None = None) -> LevelHierarchy:
        """Hierarchy with finest level L (default L_max) on the initial datum's domain"""
        data = initial_data(self.model.initial_data)
        return LevelHierarchy(
            dx0=self.hierarchy.dx0,
            K=self.hierarchy.K,
            L=self.hierarchy.L_max if L is None else L,
            m_base=self.hierarchy.m_base,
            x_min=data.x_min,
            x_max=data.x_max,
        )

    def flat(self) -> dict[str, Any]:
        """All keys of all sections in one mapping"""
        flat: dict[str, Any] = {}
        for section in SECTIONS:
            flat.update(getattr(self, section).model_dump())
        return flat

    def with_overrides(self, overrides: Mapping[str, Any]) -> ExperimentConfig:
        """
        Copy with flat key overrides applied and revalidated.

        Raises:
            ConfigError: for unknown keys or invalid values
        """
        sections = {section: getattr(self, section).model_dump() for section in SECTIONS}
        owners = key_sections()
        for key, value in overrides.items():
            if key not in owners:
                raise ConfigError(f"Unknown configuration key {key!r}")
            sections[owners[key]][key] = parse_number(value) if isinstance(value, str) else value
        try:
            return ExperimentConfig.model_validate(sections)
        except ValidationError as e:
            raise ConfigError(_first_error(e)) from e

    @classmethod
    def preset(cls, name: PresetName) -> ExperimentConfig:
        """
        Configurations of the published experiments.

        exponent: random exponent p ~ 𝒰(1.5, 2.5), Riemann data, T = 0.3.
        residual: random residual saturations, Riemann data, T = 0.3.
        sine: random exponent, sine data on [0, 0.5], Δx₀ = 1/16, T = 0.5.
        """
        if name == "exponent":
            return cls.model_validate({"model": {"distribution": "random_exponent"}})
        if name == "residual":
            return cls.model_validate({"model": {"distribution": "random_residual"}})
        if name == "sine":
            return cls.model_validate(
                {
                    "model": {"distribution": "random_exponent", "initial_data": "sine"},
                    "hierarchy": {"dx0": 1 / 16},
                    "run": {"T": 0.5},
                }
            )
        raise ConfigError(f"Unknown preset {name!r}")


SECTION_MODELS: dict[str, type[BaseModel]] = {
    "model": ModelSection,
    "scheme": SchemeConfig,
    "hierarchy": HierarchySection,
    "run": RunSection,
}


def key_sections() -> dict[str, str]:
    """Map of every configuration key to the section that owns it"""
    return {key: section for section, model in SECTION_MODELS.items() for key in model.model_fields}


def _first_error(error: ValidationError) -> str:
    details = error.errors()[0]
    location = ".".join(str(part) for part in details["loc"])
    return f"{location}: {details['msg']}"


def _line_numbers(text: str) -> dict[tuple[str, str], int]:
    """(section, key) → 1-based line of its definition"""
    lines: dict[tuple[str, str], int] = {}
    section = ""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            lines[(section, "")] = number
        elif line and line[0] not in "#;" and ("=" in line or ":" in line):
            key = re.split(r"[=:]", line, maxsplit=1)[0].strip()
            lines[(section, key)] = number
    return lines


def load_config(path: Path | str, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """
    Read an INI experiment file and apply flat overrides.

    Raises:
        ConfigError: with the file path and the line of the offending key
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config: {e}", path) from e

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(text, source=str(path))
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigError(f"Malformed line: {e.errors[0][1] if e.errors else e}", path, line) from e
    except configparser.Error as e:
        raise ConfigError(str(e), path, getattr(e, "lineno", None)) from e

    lines = _line_numbers(text)
    owners = key_sections()
    sections: dict[str, dict[str, Any]] = {section: {} for section in SECTIONS}
    for section in parser.sections():
        if section not in sections:
            raise ConfigError(f"Unknown section [{section}]", path, lines.get((section, "")))
        for key, value in parser.items(section):
            if owners.get(key) != section:
                raise ConfigError(f"Unknown key {key!r} in [{section}]", path, lines.get((section, key)))
            sections[section][key] = parse_number(value)

    try:
        config = ExperimentConfig.model_validate(sections)
    except ValidationError as e:
        details = e.errors()[0]
        loc = [str(part) for part in details["loc"]]
        line = lines.get((loc[0], loc[1])) if len(loc) >= 2 else None
        raise ConfigError(f"{'.'.join(loc)}: {details['msg']}", path, line) from e

    logger.debug(f"Loaded experiment config from {path}")
    return config.with_overrides(overrides) if overrides else config
