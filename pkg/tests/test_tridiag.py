"""Tests for the Thomas solver."""

import numpy as np
import pytest
from scipy import linalg

from paraxial_tomo.core import TridiagonalSystem, tridiag_solve
from paraxial_tomo.errors import ShapeMismatch, SingularPivot
from tests.conftest import random_complex


def test_identity_system():
    system = TridiagonalSystem(lower=[0, 0], diag=[1, 1, 1], upper=[0, 0])
    rhs = np.array([3.0, -1.0, 2j])
    assert np.allclose(tridiag_solve(system, rhs), rhs, rtol=0, atol=0)


def test_two_by_two_by_hand():
    system = TridiagonalSystem(lower=[1], diag=[2, 2], upper=[1])
    assert np.allclose(tridiag_solve(system, np.array([3.0, 3.0])), [1.0, 1.0], rtol=1e-15)


def _random_system(rng, n):
    lower = random_complex(rng, (n - 1,))
    upper = random_complex(rng, (n - 1,))
    diag = random_complex(rng, (n,)) + 6.0
    return TridiagonalSystem(lower=lower, diag=diag, upper=upper)


def test_matches_dense_lu(rng):
    system = _random_system(rng, 64)
    rhs = random_complex(rng, (64,))
    expected = linalg.lu_solve(linalg.lu_factor(system.to_dense()), rhs)
    result = tridiag_solve(system, rhs)
    assert np.linalg.norm(result - expected) <= 1e-12 * np.linalg.norm(expected)


def test_multiply_back_reproduces_rhs(rng):
    system = _random_system(rng, 200)
    rhs = random_complex(rng, (200,))
    assert np.linalg.cond(system.to_dense()) < 1e6
    residual = system.matvec(tridiag_solve(system, rhs)) - rhs
    assert np.linalg.norm(residual) <= 1e-12 * np.linalg.norm(rhs)


def test_batched_columns_match_single_solves(rng):
    system = _random_system(rng, 40)
    factor = system.factor()
    rhs = random_complex(rng, (40, 5))
    batched = factor.solve(rhs)
    for column in range(5):
        assert np.allclose(batched[:, column], factor.solve(rhs[:, column]), rtol=1e-12, atol=0)


def test_conjugate_transpose_matches_dense(rng):
    system = _random_system(rng, 12)
    assert np.allclose(system.conjugate_transpose().to_dense(), system.to_dense().conj().T)


def test_constant_bands():
    system = TridiagonalSystem.constant(4, 1.0, -2.0, 1.0)
    assert system.size == 4
    assert np.allclose(system.to_dense()[1, :3], [1.0, -2.0, 1.0])


def test_singular_pivot():
    system = TridiagonalSystem(lower=[1], diag=[1, 1], upper=[1])
    with pytest.raises(SingularPivot) as excinfo:
        tridiag_solve(system, np.ones(2))
    assert excinfo.value.index == 1


def test_zero_leading_pivot():
    with pytest.raises(SingularPivot):
        TridiagonalSystem(lower=[1], diag=[0, 1], upper=[1]).factor()


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        TridiagonalSystem(lower=[1, 1], diag=[1, 1], upper=[1])
    system = TridiagonalSystem.constant(3, 0, 1, 0)
    with pytest.raises(ShapeMismatch):
        tridiag_solve(system, np.ones(4))
