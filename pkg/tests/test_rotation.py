"""Tests for the rotation gather and its exact transpose."""

import numpy as np
import pytest

from paraxial_tomo.core import ComplexField, Grid2D, RealField, l2_inner
from paraxial_tomo.errors import GridMismatch
from paraxial_tomo.phantom import RotationOperator, disk, gaussian_bump, rotate, rotate_transpose


def _impulse(grid: Grid2D, i: int, j: int) -> RealField:
    values = np.zeros(grid.shape)
    values[i, j] = 1.0
    return RealField(grid, values)


def test_zero_angle_is_identity(small_grid, rng):
    op = RotationOperator.build(0.0, small_grid)
    field = RealField(small_grid, rng.standard_normal(small_grid.shape))
    assert np.array_equal(rotate(op, field).values, field.values)
    assert np.array_equal(rotate_transpose(op, field).values, field.values)


def test_half_turn_on_symmetric_phantom():
    grid = Grid2D.square(65)
    phantom = gaussian_bump(grid)
    op = RotationOperator.build(np.pi, grid)
    assert np.allclose(rotate(op, phantom.field).values, phantom.values, rtol=0, atol=1e-12)


def test_quarter_turn_moves_impulse():
    grid = Grid2D.square(17)
    i, j = 4, 11
    op = RotationOperator.build(np.pi / 2, grid)
    out = rotate(op, _impulse(grid, i, j)).values
    # f(R p) with R p = (-y, x): the mass lands at (a, b) = (j, n - 1 - i)
    expected = np.zeros(grid.shape)
    expected[j, grid.n_x - 1 - i] = 1.0
    assert np.allclose(out, expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("angle", [0.3, 1.1, 2.5, 4.0])
def test_dot_test(angle, rng):
    grid = Grid2D.square(40)
    op = RotationOperator.build(angle, grid)
    f = RealField(grid, rng.standard_normal(grid.shape))
    g = RealField(grid, rng.standard_normal(grid.shape))
    lhs = l2_inner(rotate(op, f), g)
    rhs = l2_inner(f, rotate_transpose(op, g))
    assert abs(lhs - rhs) <= 1e-13 * abs(lhs)


def test_transpose_of_impulse_has_row_weights():
    grid = Grid2D.square(41)
    op = RotationOperator.build(0.3, grid)
    out = rotate_transpose(op, _impulse(grid, 20, 23)).values
    nonzero = np.count_nonzero(out)
    assert 1 <= nonzero <= 4
    assert out.sum() == pytest.approx(1.0, abs=1e-14)


def test_row_weights_sum_to_one_inside():
    grid = Grid2D.square(41)
    op = RotationOperator.build(0.7, grid)
    rows = np.asarray(op.matrix.sum(axis=1)).ravel().reshape(grid.shape)
    X, Y = grid.mesh()
    inside = np.hypot(X, Y) < 0.45 * grid.length_L
    assert np.allclose(rows[inside], 1.0, atol=1e-14)
    corners = np.hypot(X, Y) > 0.5 * np.sqrt(2) * grid.length_L * 0.999
    assert np.all(rows[corners] == 0.0)


def test_sup_norm_contraction(rng):
    grid = Grid2D.square(33)
    field = RealField(grid, rng.uniform(-1.0, 1.0, grid.shape))
    for angle in (0.2, 1.3, 3.0):
        out = rotate(RotationOperator.build(angle, grid), field)
        assert np.max(np.abs(out.values)) <= np.max(np.abs(field.values)) + 1e-15


def test_complex_fields_keep_type(small_grid):
    op = RotationOperator.build(0.5, small_grid)
    field = ComplexField(small_grid, np.ones(small_grid.shape) * (1 + 2j))
    assert isinstance(rotate(op, field), ComplexField)


def test_grid_mismatch():
    op = RotationOperator.build(0.5, Grid2D.square(16))
    with pytest.raises(GridMismatch):
        rotate(op, disk(Grid2D.square(17)).field)
