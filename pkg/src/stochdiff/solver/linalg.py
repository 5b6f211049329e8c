"""
Cyclic tridiagonal solve: Thomas algorithm plus a Sherman–Morrison correction
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy.linalg.lapack import dgtsv

from stochdiff.errors import SingularMatrixError

FloatArray = npt.NDArray[np.float64]


def thomas_periodic(
    lower: npt.ArrayLike,
    diag: npt.ArrayLike,
    upper: npt.ArrayLike,
    corner_lr: float,
    corner_ul: float,
    rhs: npt.ArrayLike,
) -> FloatArray:
    """
    Solve the cyclic tridiagonal system A x = rhs in O(n).

    Args:
        lower: lower[j] = A[j, j-1] for j ≥ 1 (lower[0] is ignored)
        diag: diag[j] = A[j, j]
        upper: upper[j] = A[j, j+1] for j ≤ n-2 (upper[n-1] is ignored)
        corner_lr: A[n-1, 0], the periodic entry of the last row
        corner_ul: A[0, n-1], the periodic entry of the first row
        rhs: Right-hand side

    Returns:
        Solution x

    Raises:
        SingularMatrixError: on a zero pivot in the corrected tridiagonal solve
            or a vanishing Sherman–Morrison denominator

    Notes:
        A = B + u vᵀ with u = (γ, 0, …, 0, corner_lr) and
        v = (1, 0, …, 0, corner_ul/γ), γ = −diag[0]. B is tridiagonal and both
        B y = rhs and B z = u are solved by one LAPACK gtsv call. Inputs are not
        mutated. With n = 2 the 2×2 system is solved directly.
    """
    b = np.array(diag, dtype=np.float64)
    lo = np.asarray(lower, dtype=np.float64)
    up = np.asarray(upper, dtype=np.float64)
    r = np.asarray(rhs, dtype=np.float64)
    n = b.shape[0]
    if n < 2 or lo.shape[0] != n or up.shape[0] != n or r.shape[0] != n:
        raise ValueError(f"thomas_periodic needs equal-length arrays with n ≥ 2, got n={n}")

    if n == 2:
        return _solve_two_cells(b, lo[1] + corner_lr, up[0] + corner_ul, r)

    gamma = -b[0] if b[0] != 0 else 1.0
    b[0] -= gamma
    b[-1] -= corner_lr * corner_ul / gamma

    u = np.zeros(n, dtype=np.float64)
    u[0] = gamma
    u[-1] = corner_lr

    _, _, _, solution, info = dgtsv(lo[1:], b, up[:-1], np.column_stack([r, u]))
    if info > 0:
        raise SingularMatrixError(f"Zero pivot at row {info - 1} of the corrected tridiagonal system")
    if info < 0:
        raise ValueError(f"Illegal argument {-info} passed to dgtsv")
    y, z = solution[:, 0], solution[:, 1]

    ratio = corner_ul / gamma
    denominator = 1.0 + z[0] + ratio * z[-1]
    if denominator == 0 or not np.isfinite(denominator):
        raise SingularMatrixError("Sherman–Morrison denominator vanishes; cyclic system is singular")
    factor = (y[0] + ratio * y[-1]) / denominator
    x: FloatArray = y - factor * z
    return x


def _solve_two_cells(diag: FloatArray, below: float, above: float, rhs: FloatArray) -> FloatArray:
    """On two cells both neighbours coincide, so the off-diagonals and corners add up"""
    det = diag[0] * diag[1] - above * below
    if det == 0 or not np.isfinite(det):
        raise SingularMatrixError("Two-cell cyclic system is singular")
    x: FloatArray = np.array([diag[1] * rhs[0] - above * rhs[1], diag[0] * rhs[1] - below * rhs[0]]) / det
    return x
