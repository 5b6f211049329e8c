"""
Deterministic quadrature reference over the random parameter box
"""

from __future__ import annotations

import itertools
import logging
from functools import partial

import numpy as np

from stochdiff.core import FloatArray, GridSpec, SolutionField
from stochdiff.core.quadrature import gauss_legendre_rule
from stochdiff.estimators import pairwise_sum
from stochdiff.models import RandomDataModel
from stochdiff.sampling import SampleTask, run_samples
from stochdiff.solver import SchemeConfig, run

logger = logging.getLogger(__name__)

MAX_PARAMETER_DIMENSION = 2


def parameter_nodes(model: RandomDataModel, n_nodes: int) -> list[tuple[tuple[float, ...], float]]:
    """
    Tensor Gauss–Legendre nodes over the uniform parameter box with weights
    summing to one. A law without random parameters has one node of weight 1.
    """
    box = model.parameter_box()
    if len(box) > MAX_PARAMETER_DIMENSION:
        raise ValueError(f"Quadrature reference supports at most {MAX_PARAMETER_DIMENSION} parameters")
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be at least 1, got {n_nodes}")

    t, w = gauss_legendre_rule(n_nodes)
    axes = []
    for parameter in box:
        centre = 0.5 * (parameter.low + parameter.high)
        half = 0.5 * (parameter.high - parameter.low)
        axes.append(list(zip((centre + half * t).tolist(), (w / np.sum(w)).tolist(), strict=True)))

    nodes = []
    for combination in itertools.product(*axes):
        values = tuple(value for value, _ in combination)
        weight = float(np.prod([weight for _, weight in combination])) if combination else 1.0
        nodes.append((values, weight))
    return nodes


def _solve_node(
    model: RandomDataModel, grid: GridSpec, cfg: SchemeConfig, T: float, values: tuple[float, ...]
) -> SolutionField:
    sample = model.sample_at(values)
    field, _ = run(sample.initial, sample.flux, grid, cfg, T)
    return field


def quadrature_reference(
    model: RandomDataModel,
    grid: GridSpec,
    cfg: SchemeConfig,
    T: float,
    n_nodes: int,
    *,
    moment: int = 1,
    workers: int | None = None,
) -> SolutionField:
    """
    Weighted mean of deterministic solves at the quadrature nodes of the
    parameter box: a variance-free estimate of E[u(T)] (or E[u(T)^moment]).

    Raises:
        ValueError: for laws with more than two random parameters
    """
    nodes = parameter_nodes(model, n_nodes)
    tasks = [
        SampleTask(level=0, index=index, run=partial(_solve_node, model, grid, cfg, T, values))
        for index, (values, _) in enumerate(nodes)
    ]
    logger.info(f"Quadrature reference: {len(nodes)} solves on {grid.n_cells} cells")
    fields = run_samples(tasks, workers)

    weighted: list[FloatArray] = [
        weight * field.values**moment for (_, weight), field in zip(nodes, fields, strict=True)
    ]
    return SolutionField(grid, pairwise_sum(weighted), T)
