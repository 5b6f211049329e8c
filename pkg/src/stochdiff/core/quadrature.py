"""
Fixed Gauss–Legendre rules and adaptive panel integrals on batches of intervals
"""

from __future__ import annotations

from collections.abc import Callable
from functools import cache

import numpy as np
import numpy.typing as npt
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad_vec

from stochdiff.errors import QuadratureError

FloatArray = npt.NDArray[np.float64]
Integrand = Callable[[FloatArray], npt.ArrayLike]

DEFAULT_ORDER = 5


@cache
def gauss_legendre_rule(order: int) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights on [-1, 1]"""
    nodes, weights = leggauss(order)
    return nodes, weights


def _evaluate(func: Integrand, x: FloatArray) -> FloatArray:
    # constant integrands may return a scalar
    return np.broadcast_to(np.asarray(func(x), dtype=np.float64), x.shape)


def gauss_legendre(func: Integrand, a: npt.ArrayLike, b: npt.ArrayLike, order: int = DEFAULT_ORDER) -> FloatArray:
    """
    Fixed-order Gauss–Legendre integral of func over each [a_i, b_i].

    func must accept an array of abscissae and evaluate elementwise.
    """
    lo = np.atleast_1d(np.asarray(a, dtype=np.float64))
    hi = np.atleast_1d(np.asarray(b, dtype=np.float64))
    nodes, weights = gauss_legendre_rule(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    values = _evaluate(func, x)
    result: FloatArray = (values @ weights) * half
    return result


def panel_integrals(
    func: Integrand,
    a: npt.ArrayLike,
    b: npt.ArrayLike,
    *,
    tol: float = 1e-10,
    limit: int = 10000,
) -> FloatArray:
    """
    Integrate func over every [a_i, b_i] with one vector-valued adaptive
    Gauss–Kronrod pass.

    Each panel is mapped onto [0, 1] so all panels share the subdivision;
    tol bounds the summed error over all panels.

    Raises:
        QuadratureError: if the subdivision limit is hit or the integral is not finite
    """
    lo = np.atleast_1d(np.asarray(a, dtype=np.float64))
    width = np.atleast_1d(np.asarray(b, dtype=np.float64)) - lo

    def mapped(t: float) -> FloatArray:
        return _evaluate(func, lo + t * width) * width

    result, error, info = quad_vec(mapped, 0.0, 1.0, epsabs=tol, epsrel=0.0, norm="1", limit=limit, full_output=True)
    if not info.success:
        raise QuadratureError(f"Adaptive quadrature on {lo.shape[0]} panels stopped at error {error:.3e}: {info.message}")
    values = np.asarray(result, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("Quadrature produced a non-finite value")
    return values


def cumulative_integral(
    func: Integrand,
    nodes: npt.ArrayLike,
    *,
    tol: float = 1e-10,
    offset: float = 0.0,
) -> FloatArray:
    """Running integral offset + ∫_{nodes[0]}^{nodes[k]} func at every node"""
    x = np.asarray(nodes, dtype=np.float64)
    pieces = panel_integrals(func, x[:-1], x[1:], tol=tol)
    table = np.empty_like(x)
    table[0] = offset
    table[1:] = offset + np.cumsum(pieces)
    return table
