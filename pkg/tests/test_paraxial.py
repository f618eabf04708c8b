"""Tests for wave parameters, the envelope march and the forward map."""

import numpy as np
import pytest
from scipy import linalg

from paraxial_tomo.core import ComplexField, Grid2D, RealField
from paraxial_tomo.errors import GridMismatch, ShapeMismatch, ValueOutOfRange
from paraxial_tomo.paraxial import (
    EnvelopePropagator,
    Sinogram,
    WaveParams,
    angle_weight,
    forward_map,
    march_envelope,
    uniform_angles,
)
from paraxial_tomo.paraxial import forward as forward_module
from paraxial_tomo.phantom import disk, gaussian_bump
from tests.conftest import random_complex


class TestWaveParams:
    def test_wavenumber(self):
        params = WaveParams(2.0, 100.0)
        assert params.wavelength == pytest.approx(0.02)
        assert params.wavenumber == pytest.approx(2 * np.pi * 50.0)
        assert params.k == params.wavenumber

    @pytest.mark.parametrize("length, ratio", [(0.0, 10.0), (1.0, 0.0), (1.0, -5.0)])
    def test_rejects_invalid(self, length, ratio):
        with pytest.raises(ValueOutOfRange):
            WaveParams(length, ratio)


class TestAngles:
    def test_default_full_turn(self):
        angles = uniform_angles(360)
        assert angles.size == 360
        assert angles[1] == pytest.approx(np.pi / 180)
        assert angles[-1] < 2 * np.pi

    def test_explicit_step(self):
        assert np.allclose(np.rad2deg(uniform_angles(4, 10.0)), [0, 10, 20, 30])

    def test_wrapping_rejected(self):
        with pytest.raises(ValueOutOfRange):
            uniform_angles(10, 40.0)

    def test_angle_weight(self):
        assert angle_weight(uniform_angles(360)) == pytest.approx(2 * np.pi / 360)
        assert angle_weight(uniform_angles(8, 5.0)) == pytest.approx(np.deg2rad(5.0))
        assert angle_weight(np.array([0.0, 0.1, 1.0])) == pytest.approx(2 * np.pi / 3)


class TestSinogram:
    def test_validation(self, params):
        with pytest.raises(ValueOutOfRange):
            Sinogram(np.array([0.5, 0.1]), np.zeros((2, 8)), params)
        with pytest.raises(ValueOutOfRange):
            Sinogram(np.array([0.0, 7.0]), np.zeros((2, 8)), params)
        with pytest.raises(ShapeMismatch):
            Sinogram(np.array([0.0, 0.1]), np.zeros((3, 8)), params)
        with pytest.raises(ValueOutOfRange):
            Sinogram(np.array([0.0]), np.full((1, 8), np.inf), params)

    def test_cell_measure(self, params):
        sino = Sinogram.zeros(uniform_angles(4), 11, params)
        assert sino.cell_measure == pytest.approx((np.pi / 2) * 0.1)


class TestMarch:
    def test_zero_source_zero_field(self, small_grid, params):
        field = march_envelope(RealField.zeros(small_grid), params)
        assert not np.any(field.values)

    def test_homogeneous_march_is_unitary(self, rng):
        grid = Grid2D(n_x=257, n_y=64)
        params = WaveParams(1.0, 10.0)
        start = random_complex(rng, (grid.n_y,))
        start[[0, -1]] = 0.0
        field = march_envelope(RealField.zeros(grid), params, initial_slice=start)
        norms = np.linalg.norm(field.values, axis=1)
        assert np.allclose(norms, np.linalg.norm(start), rtol=1e-12, atol=0)

    def test_matches_dense_lu_recurrence(self):
        grid = Grid2D.square(24)
        params = WaveParams(1.0, 5.0)
        values = np.zeros(grid.shape)
        values[9, 13] = 1.0
        field = march_envelope(RealField(grid, values), params)

        m = grid.n_y - 2
        dx, dy = grid.spacing_x, grid.spacing_y
        second = (np.diag(np.full(m, -2.0)) + np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)) / dy**2
        A = second / (4j * params.wavenumber)
        implicit = np.eye(m) + 0.5 * dx * A
        explicit = np.eye(m) - 0.5 * dx * A
        lu = linalg.lu_factor(implicit)
        v = np.zeros(m, dtype=complex)
        for j in range(grid.n_x - 1):
            source = 0.5 * dx * (values[j, 1:-1] + values[j + 1, 1:-1])
            v = linalg.lu_solve(lu, explicit @ v + source)

        exit_slice = field.values[-1, 1:-1]
        assert np.linalg.norm(exit_slice - v) <= 1e-12 * np.linalg.norm(v)

    def test_self_convergence_is_second_order(self):
        params = WaveParams(1.0, 10.0)
        exits = []
        for n in (129, 257, 513):
            grid = Grid2D.square(n)
            exits.append(march_envelope(gaussian_bump(grid).field, params).values[-1])
        coarse_gap = np.linalg.norm(exits[1][::2] - exits[0])
        fine_gap = np.linalg.norm(exits[2][::4] - exits[1][::2])
        assert np.log2(coarse_gap / fine_gap) >= 1.8

    def test_length_mismatch(self, small_grid):
        with pytest.raises(GridMismatch):
            EnvelopePropagator(small_grid, WaveParams(2.0, 10.0))

    def test_back_propagate_is_exact_transpose(self, rng, params):
        grid = Grid2D(n_x=30, n_y=20)
        propagator = EnvelopePropagator(grid, params)
        sources = random_complex(rng, grid.shape)
        terminal = random_complex(rng, (grid.n_y,))
        terminal[[0, -1]] = 0.0
        lhs = np.vdot(terminal, propagator.propagate(sources))
        rhs = np.vdot(propagator.back_propagate(terminal), sources)
        assert abs(lhs - rhs) <= 1e-13 * abs(lhs)

    def test_batched_sources_match_single(self, rng, params, small_grid):
        propagator = EnvelopePropagator(small_grid, params)
        sources = random_complex(rng, small_grid.shape + (3,))
        batched = propagator.propagate(sources)
        for column in range(3):
            assert np.allclose(batched[:, column], propagator.propagate(sources[..., column]), rtol=1e-14)


class TestForwardMap:
    def test_zero_phantom(self, small_grid, params):
        sino = forward_map(RealField.zeros(small_grid), uniform_angles(6), params)
        assert sino.values.shape == (6, small_grid.n_y)
        assert not np.any(sino.values)

    def test_radially_symmetric_rows_agree(self):
        grid = Grid2D.square(128)
        params = WaveParams(1.0, 100.0)
        sino = forward_map(gaussian_bump(grid), uniform_angles(16), params)
        reference = sino.values[0]
        for row in sino.values[1:]:
            assert np.linalg.norm(row - reference) <= 1e-2 * np.linalg.norm(reference)

    def test_without_diffusion_row_is_column_sum(self, params):
        grid = Grid2D.square(64)
        phantom = disk(grid, radius=0.3)
        sino = forward_map(phantom, np.array([0.0]), params, diffusion=False)
        column_sums = grid.spacing_x * phantom.values.sum(axis=0)
        assert np.allclose(sino.values[0].real, column_sums, rtol=1e-12, atol=1e-14)
        assert not np.any(sino.values[0].imag)

    def test_radon_limit_with_diffusion(self):
        grid = Grid2D.square(512)
        params = WaveParams(1.0, 1000.0)
        phantom = gaussian_bump(grid)
        sino = forward_map(phantom, np.array([0.0]), params)
        column_sums = grid.spacing_x * phantom.values.sum(axis=0)
        assert np.linalg.norm(sino.values[0] - column_sums) <= 0.02 * np.linalg.norm(column_sums)

    def test_linearity(self, rng, params):
        grid = Grid2D.square(32)
        angles = uniform_angles(5)
        b1 = ComplexField(grid, random_complex(rng, grid.shape))
        b2 = ComplexField(grid, random_complex(rng, grid.shape))
        combined = forward_map(ComplexField(grid, 2.5 * b1.values + b2.values), angles, params)
        separate = 2.5 * forward_map(b1, angles, params).values + forward_map(b2, angles, params).values
        assert np.linalg.norm(combined.values - separate) <= 1e-12 * np.linalg.norm(separate)

    def test_independent_of_worker_count(self, params):
        grid = Grid2D.square(32)
        phantom = gaussian_bump(grid, width=0.1)
        angles = uniform_angles(70)
        serial = forward_map(phantom, angles, params, workers=1)
        threaded = forward_map(phantom, angles, params, workers=4)
        assert np.array_equal(serial.values, threaded.values)

    def test_warns_when_beta_reaches_lateral_edge(self, mocker, params, small_grid):
        spy = mocker.patch.object(forward_module, "logger")
        values = np.zeros(small_grid.shape)
        values[10, 3] = 1.0
        forward_map(RealField(small_grid, values), np.array([0.0]), params)
        events = [call.args[0] for call in spy.warning.call_args_list]
        assert "beta_near_lateral_boundary" in events

    def test_grid_length_mismatch(self, small_grid):
        with pytest.raises(GridMismatch):
            forward_map(RealField.zeros(small_grid), np.array([0.0]), WaveParams(3.0, 10.0))
