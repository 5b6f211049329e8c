"""
Tests for the cyclic tridiagonal solver
"""

import numpy as np
import pytest

from stochdiff.errors import SingularMatrixError
from stochdiff.solver import thomas_periodic


def assemble(lower, diag, upper, corner_lr, corner_ul):
    """Dense matrix of a cyclic tridiagonal system"""
    n = len(diag)
    matrix = np.diag(np.asarray(diag, dtype=np.float64))
    matrix[np.arange(1, n), np.arange(n - 1)] = lower[1:]
    matrix[np.arange(n - 1), np.arange(1, n)] = upper[:-1]
    matrix[n - 1, 0] = corner_lr
    matrix[0, n - 1] = corner_ul
    return matrix


def test_identity_returns_rhs():
    n = 5
    rhs = np.array([1.0, -2.0, 3.0, 0.5, 7.0])
    x = thomas_periodic(np.zeros(n), np.ones(n), np.zeros(n), 0.0, 0.0, rhs)
    np.testing.assert_allclose(x, rhs, rtol=0, atol=1e-15)


def test_small_cyclic_system_matches_dense_solve():
    """n = 4 with diagonal 4 and every off-diagonal and corner 1"""
    ones = np.ones(4)
    rhs = np.array([1.0, 0.0, 0.0, 0.0])
    x = thomas_periodic(ones, 4 * ones, ones, 1.0, 1.0, rhs)
    expected = np.linalg.solve(assemble(ones, 4 * ones, ones, 1.0, 1.0), rhs)
    np.testing.assert_allclose(x, expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 7, 16, 33, 64])
def test_random_dominant_systems(n: int):
    """Residual ‖Ax − b‖∞ ≤ 1e-10 on diagonally dominant systems"""
    rng = np.random.default_rng(n)
    lower = rng.uniform(-1.0, 1.0, n)
    upper = rng.uniform(-1.0, 1.0, n)
    corner_lr, corner_ul = upper[-1], lower[0]
    diag = 2.5 + np.abs(lower) + np.abs(upper)
    rhs = rng.normal(size=n)
    x = thomas_periodic(lower, diag, upper, corner_lr, corner_ul, rhs)
    residual = assemble(lower, diag, upper, corner_lr, corner_ul) @ x - rhs
    assert np.max(np.abs(residual)) <= 1e-10


def test_asymmetric_corners():
    """Corner entries enter at the right positions"""
    lower = np.array([0.0, -1.0, -0.5, -0.2])
    upper = np.array([-0.3, -0.1, -0.7, 0.0])
    diag = np.array([3.0, 2.0, 4.0, 5.0])
    rhs = np.array([1.0, 2.0, 3.0, 4.0])
    x = thomas_periodic(lower, diag, upper, -0.9, -0.4, rhs)
    expected = np.linalg.solve(assemble(lower, diag, upper, -0.9, -0.4), rhs)
    np.testing.assert_allclose(x, expected, rtol=0, atol=1e-12)


def test_zero_leading_diagonal():
    """γ falls back to 1 when diag[0] vanishes"""
    lower = np.array([0.0, 1.0, 1.0, 1.0])
    upper = np.array([1.0, 1.0, 1.0, 0.0])
    diag = np.array([0.0, 4.0, 4.0, 4.0])
    rhs = np.array([1.0, 1.0, 1.0, 1.0])
    x = thomas_periodic(lower, diag, upper, 1.0, 1.0, rhs)
    np.testing.assert_allclose(assemble(lower, diag, upper, 1.0, 1.0) @ x, rhs, rtol=0, atol=1e-12)


def test_two_cells_fold_corners_into_off_diagonals():
    """On two cells A[0,1] = upper[0] + corner_ul and A[1,0] = lower[1] + corner_lr"""
    lower = np.array([-0.4, -1.0])
    upper = np.array([-0.3, -0.6])
    diag = np.array([3.0, 2.5])
    rhs = np.array([1.0, -2.0])
    x = thomas_periodic(lower, diag, upper, float(upper[-1]), float(lower[0]), rhs)
    matrix = np.array([[3.0, -0.3 - 0.4], [-1.0 - 0.6, 2.5]])
    np.testing.assert_allclose(x, np.linalg.solve(matrix, rhs), rtol=0, atol=1e-14)


def test_singular_two_cell_system():
    with pytest.raises(SingularMatrixError):
        thomas_periodic(np.zeros(2), np.ones(2), np.array([1.0, 0.0]), 0.0, 0.0, np.ones(2))


def test_inputs_are_not_mutated():
    diag = np.full(4, 3.0)
    ones = np.ones(4)
    thomas_periodic(ones, diag, ones, 1.0, 1.0, ones)
    np.testing.assert_array_equal(diag, 3.0)


def test_zero_matrix_is_singular():
    zeros = np.zeros(4)
    with pytest.raises(SingularMatrixError):
        thomas_periodic(zeros, zeros, zeros, 0.0, 0.0, np.ones(4))


def test_rejects_short_or_ragged_input():
    with pytest.raises(ValueError):
        thomas_periodic(np.ones(1), np.ones(1), np.ones(1), 0.0, 0.0, np.ones(1))
    with pytest.raises(ValueError):
        thomas_periodic(np.ones(4), np.ones(5), np.ones(4), 0.0, 0.0, np.ones(4))
