"""Tests for the Riccati solver, Jacobi-weighted transforms and the X-ray transform."""

import math

import numpy as np
import pytest
from scipy import integrate

from paraxial_tomo.beams import (
    C_MATRIX,
    CurvatureProfile,
    Line2D,
    TransversalJacobi,
    c0_drift,
    conserved_c0,
    field_sampler,
    flat_solution,
    jacobi_ray_transform,
    line_interval,
    solve_yz,
    unit_disk_chords,
    xray_nodes,
    xray_transform,
)
from paraxial_tomo.core import Grid2D, RealField
from paraxial_tomo.errors import ConjugatePoint, ValueOutOfRange
from paraxial_tomo.formats import write_rf64
from paraxial_tomo.phantom import shepp_logan

IDENTITY = np.eye(3)


class TestCurvatureProfile:
    def test_flat(self):
        profile = CurvatureProfile.from_spec("flat")
        assert profile.label == "flat"
        assert np.array_equal(profile(0.4), np.zeros((3, 3)))

    def test_constant(self):
        profile = CurvatureProfile.from_spec("constant:2.5", tau_max=2.0)
        assert profile.length == 2.0
        assert np.array_equal(profile(1.3), np.diag([0.0, 2.5, 2.5]))

    def test_table_interpolates_linearly(self):
        matrices = np.zeros((2, 3, 3))
        matrices[1] = np.diag([0.0, 2.0, 4.0])
        profile = CurvatureProfile.from_table(np.array([0.0, 1.0]), matrices)
        assert np.allclose(profile(0.25), np.diag([0.0, 0.5, 1.0]))
        with pytest.raises(ValueOutOfRange):
            profile(1.5)

    def test_table_rejects_asymmetric_sample(self):
        matrices = np.zeros((2, 3, 3))
        matrices[0, 0, 1] = 1.0
        with pytest.raises(ValueOutOfRange):
            CurvatureProfile.from_table(np.array([0.0, 1.0]), matrices)

    def test_table_file_relative_to_base_dir(self, tmp_path):
        rows = np.array(
            [
                [0.0, 0.0, 0.0, 0.0, 1.0, 0.5, 1.0],
                [2.0, 0.0, 0.0, 0.0, 3.0, 0.5, 3.0],
            ]
        )
        write_rf64(tmp_path / "curv.rf64", RealField(Grid2D(2, 7), rows))
        profile = CurvatureProfile.from_spec("table:curv.rf64", base_dir=tmp_path)
        expected = np.array([[0.0, 0.0, 0.0], [0.0, 2.0, 0.5], [0.0, 0.5, 2.0]])
        assert profile.tau_max == 2.0
        assert np.allclose(profile(1.0), expected)

    @pytest.mark.parametrize("spec", ["curved", "constant:abc", "flat:1", "table:"])
    def test_unrecognized(self, spec):
        with pytest.raises(ValueOutOfRange):
            CurvatureProfile.from_spec(spec)

    def test_empty_interval(self):
        with pytest.raises(ValueOutOfRange):
            CurvatureProfile.flat(1.0, 1.0)


class TestRiccati:
    def test_flat_matches_closed_form(self):
        trajectory = solve_yz(CurvatureProfile.flat(), IDENTITY, 1j * IDENTITY, 1e-3)
        exact = flat_solution(IDENTITY, 1j * IDENTITY, trajectory.taus)
        assert np.max(np.abs(trajectory.Y - exact)) <= 1e-8
        assert np.allclose(exact[-1], IDENTITY + 1j * C_MATRIX)

    @pytest.mark.parametrize("profile", [CurvatureProfile.flat(), CurvatureProfile.constant(1.0)])
    def test_conserved_quantity(self, profile):
        trajectory = solve_yz(profile, IDENTITY, 1j * IDENTITY, 1e-3)
        assert c0_drift(trajectory) <= 1e-6
        assert conserved_c0(trajectory)[0] == pytest.approx(1.0)

    def test_constant_curvature_against_fine_step(self):
        profile = CurvatureProfile.constant(0.1)
        coarse = solve_yz(profile, IDENTITY, 1j * IDENTITY, 1e-2)
        fine = solve_yz(profile, IDENTITY, 1j * IDENTITY, 1e-4)
        assert np.allclose(fine.taus[::100], coarse.taus, rtol=0, atol=1e-12)
        scale = np.max(np.abs(fine.Y))
        assert np.max(np.abs(coarse.Y - fine.Y[::100])) <= 1e-8 * scale
        assert np.max(np.abs(coarse.H - fine.H[::100])) <= 1e-8 * np.max(np.abs(fine.H))

    def test_hessian_stays_symmetric_with_positive_imaginary_part(self):
        trajectory = solve_yz(CurvatureProfile.constant(3.0), IDENTITY, 1j * IDENTITY, 1e-3)
        for state in trajectory:
            assert np.allclose(state.H, state.H.T, atol=1e-12)
            assert np.linalg.eigvalsh(state.H.imag).min() > 0

    def test_step_fits_interval(self):
        trajectory = solve_yz(CurvatureProfile.flat(0.0, 1.0), IDENTITY, 1j * IDENTITY, 0.03)
        assert len(trajectory) == 35
        assert trajectory.taus[-1] == 1.0

    @pytest.mark.parametrize("step", [0.0, -1e-3, 0.2])
    def test_rejects_step(self, step):
        with pytest.raises(ValueOutOfRange):
            solve_yz(CurvatureProfile.flat(), IDENTITY, 1j * IDENTITY, step)

    def test_rejects_singular_start(self):
        with pytest.raises(ValueOutOfRange):
            solve_yz(CurvatureProfile.flat(), np.zeros((3, 3)), 1j * IDENTITY, 1e-2)

    def test_rejects_nonpositive_initial_hessian(self):
        with pytest.raises(ValueOutOfRange):
            solve_yz(CurvatureProfile.flat(), IDENTITY, -1j * IDENTITY, 1e-2)

    def test_real_jacobi_field(self):
        trajectory = solve_yz(
            CurvatureProfile.flat(), IDENTITY, np.zeros((3, 3)), 1e-2, require_positive=False
        )
        assert np.allclose(trajectory.Y, IDENTITY)


class TestJacobiTransform:
    def test_identity_weight_is_plain_integral(self):
        value = jacobi_ray_transform(lambda t: t**2, TransversalJacobi.identity(), (0.0, 3.0))
        assert value == pytest.approx(9.0, rel=1e-12)

    def test_constant_block_scales(self):
        ytilde = TransversalJacobi.constant(np.diag([4.0, 1.0]))
        value = jacobi_ray_transform(np.ones_like, ytilde, (0.0, 1.0))
        assert value == pytest.approx(0.5)

    def test_negative_determinant_uses_principal_branch(self):
        ytilde = TransversalJacobi.constant(np.diag([-1.0, 1.0]))
        value = jacobi_ray_transform(np.ones_like, ytilde, (0.0, 2.0))
        assert value == pytest.approx(-2j)

    def test_sign_change_is_a_conjugate_point(self):
        blocks = np.array([np.eye(2), np.diag([1.0, 0.5]), np.diag([-1.0, 1.0])])
        ytilde = TransversalJacobi(np.array([0.0, 1.0, 2.0]), blocks)
        with pytest.raises(ConjugatePoint):
            jacobi_ray_transform(np.ones_like, ytilde)

    def test_vanishing_determinant(self):
        ytilde = TransversalJacobi.constant(np.diag([0.0, 1.0]))
        with pytest.raises(ConjugatePoint):
            jacobi_ray_transform(np.ones_like, ytilde, (0.0, 1.0))

    def test_from_real_trajectory(self):
        trajectory = solve_yz(
            CurvatureProfile.flat(0.0, 2.0), IDENTITY, np.zeros((3, 3)), 1e-2, require_positive=False
        )
        ytilde = TransversalJacobi.from_trajectory(trajectory)
        assert ytilde.interval == (0.0, 2.0)
        assert jacobi_ray_transform(np.ones_like, ytilde) == pytest.approx(2.0)

    def test_gaussian_against_adaptive_quadrature(self):
        trajectory = solve_yz(
            CurvatureProfile.flat(0.0, 2.0),
            IDENTITY,
            np.diag([0.0, 0.5, 0.25]),
            1e-2,
            require_positive=False,
        )
        ytilde = TransversalJacobi.from_trajectory(trajectory)

        def f(t):
            return np.exp(-0.5 * ((t - 1.0) / 0.3) ** 2)

        value = jacobi_ray_transform(f, ytilde)
        # transverse block is diag(1 + t, 1 + t / 2)
        exact, _ = integrate.quad(
            lambda t: f(t) / math.sqrt((1.0 + t) * (1.0 + 0.5 * t)), 0.0, 2.0, epsabs=0, epsrel=1e-13
        )
        assert abs(value.imag) == 0.0
        assert value.real == pytest.approx(exact, rel=1e-8)

    def test_from_complex_trajectory_is_rejected(self):
        trajectory = solve_yz(CurvatureProfile.flat(), IDENTITY, 1j * IDENTITY, 1e-2)
        with pytest.raises(ValueOutOfRange):
            TransversalJacobi.from_trajectory(trajectory)

    def test_empty_interval_is_zero(self):
        assert jacobi_ray_transform(np.ones_like, TransversalJacobi.identity(), (1.0, 1.0)) == 0j

    def test_constant_block_needs_interval(self):
        with pytest.raises(ValueOutOfRange):
            jacobi_ray_transform(np.ones_like, TransversalJacobi.identity())

    def test_unknown_rule(self):
        with pytest.raises(ValueOutOfRange):
            jacobi_ray_transform(np.ones_like, TransversalJacobi.identity(), (0.0, 1.0), rule="gauss")


class TestLines:
    def test_from_points(self):
        line = Line2D.from_points((0.0, 1.0), (2.0, 1.0))
        assert line.angle == 0.0
        assert line.offset == pytest.approx(1.0)
        with pytest.raises(ValueOutOfRange):
            Line2D.from_points((1.0, 1.0), (1.0, 1.0))

    def test_interval_inside_square(self):
        grid = Grid2D.square(11)
        assert line_interval(Line2D(0.0, 0.0), grid) == pytest.approx((-0.5, 0.5))
        lo, hi = line_interval(Line2D(0.0, math.pi / 4), grid)
        assert hi - lo == pytest.approx(math.sqrt(2.0))

    def test_missing_line(self):
        assert line_interval(Line2D(0.7, 0.0), Grid2D.square(11)) is None


class TestXray:
    def test_constant_field(self):
        grid = Grid2D.square(101)
        result = xray_transform(RealField(grid, np.ones(grid.shape)), Line2D(0.1, 0.3))
        assert result.intersects
        expected = np.diff(line_interval(Line2D(0.1, 0.3), grid))[0]
        assert result.value == pytest.approx(expected, rel=1e-9)

    def test_miss_returns_zero(self):
        grid = Grid2D.square(21)
        result = xray_transform(RealField(grid, np.ones(grid.shape)), Line2D(2.0, 0.0))
        assert result == (0.0, False)

    def test_unit_disk_chords(self):
        for check in unit_disk_chords():
            assert check.error <= 1e-3, check

    def test_unit_disk_chords_at_angle(self):
        for check in unit_disk_chords(n=801, offsets=(0.0, 0.5), angle=0.7):
            assert check.measured == pytest.approx(check.exact, abs=2e-3)

    def test_shepp_logan_lines_against_supersampling(self, rng):
        field = shepp_logan(Grid2D.square(128)).field
        offsets = rng.uniform(-0.3, 0.3, 30)
        angles = rng.uniform(0.0, np.pi, 30)
        for offset, angle in zip(offsets, angles):
            line = Line2D(offset, angle)
            value = xray_transform(field, line).value
            oracle = xray_transform(field, line, oversample=8).value
            assert value == pytest.approx(oracle, rel=1e-3), line

    def test_flat_jacobi_transform_is_the_xray_transform(self):
        field = shepp_logan(Grid2D.square(64)).field
        line = Line2D(0.15, 0.4)
        t_min, t_max = line_interval(line, field.grid)
        trajectory = solve_yz(
            CurvatureProfile.flat(t_min, t_max), IDENTITY, np.zeros((3, 3)), 1e-2, require_positive=False
        )
        ytilde = TransversalJacobi.from_trajectory(trajectory)
        value = jacobi_ray_transform(
            field_sampler(field, line),
            ytilde,
            n_nodes=xray_nodes(t_max - t_min, field.grid),
            rule="trapezoid",
        )
        assert value.real == pytest.approx(xray_transform(field, line).value, rel=1e-8)
        assert value.imag == 0.0
