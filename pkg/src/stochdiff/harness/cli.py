"""
Command line interface
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click
from pydantic import ValidationError

from stochdiff import __version__
from stochdiff.core import write_field
from stochdiff.errors import StochdiffError
from stochdiff.estimators import equilibrated_mc_samples, mc_estimate, mlmc_estimate
from stochdiff.models import draw_sample
from stochdiff.sampling import stream_for
from stochdiff.solver import run
from stochdiff.utils import setup_logging

from .config import SECTION_MODELS, ExperimentConfig, key_sections, load_config
from .study import convergence_study
from .validate import check_continuous_dependence, run_invariant_suite, self_convergence

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

PRESETS = ("exponent", "residual", "sine")


def experiment_options(func: F) -> F:
    """Add --config, --preset and one override flag per configuration key"""
    owners = key_sections()
    for key in reversed(list(owners)):
        section = owners[key]
        description = SECTION_MODELS[section].model_fields[key].description or ""
        func = click.option(
            f"--{key}",
            key,
            default=None,
            metavar="VALUE",
            help=f"[{section}] {description}",
        )(func)
    func = click.option("--preset", type=click.Choice(PRESETS), help="Start from a published experiment")(func)
    func = click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="INI experiment file",
    )(func)
    return func


def build_config(config_path: Path | None, preset: str | None, overrides: dict[str, Any]) -> ExperimentConfig:
    """Config file or preset (or defaults) with the flag overrides applied"""
    values = {key: value for key, value in overrides.items() if value is not None}
    if config_path is not None:
        if preset is not None:
            raise click.UsageError("--config and --preset are mutually exclusive")
        return load_config(config_path, values)
    base = ExperimentConfig.preset(preset) if preset is not None else ExperimentConfig()  # type: ignore[arg-type]
    return base.with_overrides(values)


def reports_errors(func: F) -> F:
    """Turn library errors into one diagnostic line and a nonzero exit"""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (StochdiffError, ValidationError) as e:
            logger.debug("Command failed", exc_info=True)
            raise click.ClickException(str(e)) from e

    return wrapper  # type: ignore[return-value]


def _split(kwargs: dict[str, Any]) -> tuple[ExperimentConfig, dict[str, Any]]:
    keys = key_sections()
    overrides = {key: kwargs.pop(key) for key in list(kwargs) if key in keys}
    cfg = build_config(kwargs.pop("config_path"), kwargs.pop("preset"), overrides)
    return cfg, kwargs


@click.group()
@click.option("--debug", is_flag=True, help="Debug logging for all loggers")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging for stochdiff")
@click.version_option(__version__, prog_name="stochdiff")
def cli(debug: bool, verbose: bool) -> None:
    """Solvers and MC/MLMC estimators for degenerate convection–diffusion with random fluxes"""
    setup_logging(debug=debug, verbose=verbose)


@cli.command()
@experiment_options
@click.option("--sample", "sample_index", type=int, default=0, show_default=True, help="Stream index of the draw")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False, path_type=Path), help="Per-step trace file")
@reports_errors
def solve(**kwargs: Any) -> None:
    """Single deterministic run on the finest grid"""
    cfg, options = _split(kwargs)
    model = cfg.random_model()
    sample = draw_sample(model, stream_for(cfg.run.master_seed, 0, options["sample_index"]))
    hierarchy = cfg.level_hierarchy()
    grid = hierarchy.grid(hierarchy.L)

    field, work = run(sample.initial, sample.flux, grid, cfg.scheme, cfg.run.T, trace_path=options["trace_path"])
    metadata = {
        "model": model.descriptor(sample.parameters),
        "scheme": cfg.scheme.describe(),
        "master_seed": cfg.run.master_seed,
        "sample": options["sample_index"],
    }
    path = write_field(cfg.run.output_dir / "solve_field.dat", field, metadata=metadata)
    click.echo(f"Wrote {path} ({work.steps} steps, {work.cell_updates} cell updates)")


@cli.command()
@experiment_options
@click.option("--M", "m_samples", type=int, default=None, help="Sample count (default ceil(dx^(-2/3)))")
@reports_errors
def mc(**kwargs: Any) -> None:
    """Single-level Monte Carlo mean and std on the finest grid"""
    cfg, options = _split(kwargs)
    hierarchy = cfg.level_hierarchy()
    grid = hierarchy.grid(hierarchy.L)
    m_samples = options["m_samples"] or equilibrated_mc_samples(grid.dx)

    result = mc_estimate(
        cfg.random_model(), grid, cfg.scheme, cfg.run.T, m_samples, cfg.run.master_seed, workers=cfg.run.workers
    )
    path = result.dump(cfg.run.output_dir / "mc_field.dat")
    click.echo(f"Wrote {path} (M={m_samples})")


@cli.command()
@experiment_options
@reports_errors
def mlmc(**kwargs: Any) -> None:
    """Multilevel Monte Carlo mean and std with level diagnostics"""
    cfg, _ = _split(kwargs)
    result, diagnostics = mlmc_estimate(
        cfg.random_model(), cfg.level_hierarchy(), cfg.scheme, cfg.run.T, cfg.run.master_seed, workers=cfg.run.workers
    )
    field_path = result.dump(cfg.run.output_dir / "mlmc_field.dat")
    levels_path = diagnostics.write_csv(cfg.run.output_dir / "mlmc_levels.csv")
    click.echo(f"Wrote {field_path} and {levels_path} (M={result.m_samples})")


@cli.command()
@experiment_options
@reports_errors
def table(**kwargs: Any) -> None:
    """Relative error table with rates for L = 0..L_max"""
    cfg, _ = _split(kwargs)
    path = cfg.run.output_dir / "table.csv"
    report = convergence_study(cfg, path)
    click.echo(
        f"Wrote {path} (rate vs dx {report.rate_dx:.3f}, vs runtime {report.rate_work:.3f}, "
        f"vs theoretical work {report.rate_work_model:.3f})"
    )


@cli.command()
@experiment_options
@click.option("--dependence", is_flag=True, help="Also check continuous dependence on the flux")
@reports_errors
def validate(**kwargs: Any) -> None:
    """Scheme invariant suite; exits 1 when a check fails"""
    cfg, options = _split(kwargs)
    params = cfg.random_model().params
    results = run_invariant_suite(params, seed=cfg.run.master_seed, T=cfg.run.T)

    if options["dependence"]:
        model = cfg.random_model()
        baseline = model.model_copy(update={"kind": "deterministic", "deterministic_exponent": 2.0})
        calibration = self_convergence(
            baseline.sample_at(()),
            cfg.scheme,
            cfg.run.T,
            [2.0**-k for k in range(4, 9)],
            2.0**-11,
        )
        results.extend(
            check_continuous_dependence(
                model, cfg.scheme, cfg.run.T, 2.0**-7, calibration.constant, seed=cfg.run.master_seed
            )
        )

    for result in results:
        click.echo(f"{result.status.value.upper():6} {result.name}: {result.message}")
    failures = [result for result in results if not result.ok]
    if failures:
        raise click.ClickException(f"{len(failures)} of {len(results)} checks failed")
    click.echo(f"All {len(results)} checks passed")


def main() -> None:
    cli()
