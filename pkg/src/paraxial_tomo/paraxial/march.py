"""Crank-Nicolson march of the second-harmonic envelope across the domain.

The envelope obeys a complex diffusion in y driven by the nonlinearity
coefficient,

    dv/dx + A v = beta,    A = (1 / (4 i k)) D_yy,

with v = 0 on the entry slice x = -L/2 and on the lateral edges y = +-L/2.
Each x step solves

    (I + dx/2 A) v[j+1] = (I - dx/2 A) v[j] + dx (beta[j] + beta[j+1]) / 2

on the interior y nodes. A is anti-Hermitian, so the homogeneous step is a
Cayley transform and preserves the discrete L2 norm of each slice.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np

from paraxial_tomo.core.grid import ComplexField, Grid2D, RealField
from paraxial_tomo.core.tridiag import TridiagonalSystem
from paraxial_tomo.errors import GridMismatch, ShapeMismatch, ValueOutOfRange
from paraxial_tomo.paraxial.params import WaveParams
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("paraxial.march")


def check_length(grid: Grid2D, params: WaveParams) -> None:
    if not np.isclose(grid.length_L, params.length_L, rtol=1e-12, atol=0.0):
        raise GridMismatch(
            f"grid side {grid.length_L} does not match wave parameters side {params.length_L}"
        )


class EnvelopePropagator:
    """Factorized Crank-Nicolson operators for one (grid, WaveParams) pair.

    Sources and slices may carry a trailing batch axis; every column is an
    independent march sharing the same factorization.
    """

    def __init__(self, grid: Grid2D, params: WaveParams, diffusion: bool = True):
        check_length(grid, params)
        if grid.n_y < 3:
            raise ValueOutOfRange("grid.n_y", "the march needs at least one interior y node")

        self.grid = grid
        self.params = params
        self.diffusion = diffusion
        self.interior = grid.n_y - 2

        dx = grid.spacing_x
        alpha = 1.0 / (4j * params.wavenumber) if diffusion else 0.0
        half = 0.5 * dx * alpha / grid.spacing_y**2

        self.implicit = TridiagonalSystem.constant(self.interior, half, 1.0 - 2.0 * half, half)
        self.explicit = TridiagonalSystem.constant(self.interior, -half, 1.0 + 2.0 * half, -half)
        self._implicit_factor = self.implicit.factor()
        self._adjoint_factor = self.implicit.conjugate_transpose().factor()
        self._explicit_adjoint = self.explicit.conjugate_transpose()

    def step(self, v: np.ndarray, source_sum: np.ndarray) -> np.ndarray:
        """Advance interior slice(s) by one x step; ``source_sum`` is beta[j] + beta[j+1]."""
        rhs = self.explicit.matvec(v) + (0.5 * self.grid.spacing_x) * source_sum
        return self._implicit_factor.solve(rhs)

    def propagate(
        self,
        sources: np.ndarray,
        initial_slice: Optional[np.ndarray] = None,
        keep_field: bool = False,
    ) -> np.ndarray:
        """March from x = -L/2 to x = L/2.

        Args:
            sources: Array of shape (n_x, n_y) or (n_x, n_y, k).
            initial_slice: Entry slice of shape (n_y,) or (n_y, k); zero when
                omitted. Its lateral boundary values are ignored.
            keep_field: Return every slice instead of only the exit slice.

        Returns:
            Exit slice(s) of shape (n_y[, k]) or the field (n_x, n_y[, k]).
        """
        sources = np.asarray(sources)
        if sources.shape[:2] != self.grid.shape:
            raise ShapeMismatch(f"sources have shape {sources.shape}, grid is {self.grid.shape}")
        batch = sources.shape[2:]
        n_x, n_y = self.grid.shape

        s = np.asarray(sources[:, 1:-1], dtype=np.complex128)
        if initial_slice is None:
            v = np.zeros((self.interior,) + batch, dtype=np.complex128)
        else:
            initial_slice = np.asarray(initial_slice, dtype=np.complex128)
            if initial_slice.shape != (n_y,) + batch:
                raise ShapeMismatch(
                    f"initial slice has shape {initial_slice.shape}, expected {(n_y,) + batch}"
                )
            v = initial_slice[1:-1].copy()

        field = None
        if keep_field:
            field = np.zeros((n_x, n_y) + batch, dtype=np.complex128)
            field[0, 1:-1] = v

        for j in range(n_x - 1):
            v = self.step(v, s[j] + s[j + 1])
            if field is not None:
                field[j + 1, 1:-1] = v

        if field is not None:
            return field
        exit_slice = np.zeros((n_y,) + batch, dtype=np.complex128)
        exit_slice[1:-1] = v
        return exit_slice

    def back_propagate(self, terminal: np.ndarray) -> np.ndarray:
        """Exact conjugate transpose of the map sources -> exit slice.

        For any sources b and terminal data eta,
        sum(propagate(b) * conj(eta)) == sum(b * conj(back_propagate(eta)))
        up to round-off.

        Args:
            terminal: Array of shape (n_y,) or (n_y, k).

        Returns:
            Source sensitivity of shape (n_x, n_y[, k]), zero on the lateral edges.
        """
        terminal = np.asarray(terminal, dtype=np.complex128)
        n_x, n_y = self.grid.shape
        if terminal.shape[0] != n_y:
            raise ShapeMismatch(f"terminal data has {terminal.shape[0]} rows, grid has {n_y}")
        batch = terminal.shape[1:]

        sensitivity = np.zeros((n_x, n_y) + batch, dtype=np.complex128)
        weight = 0.5 * self.grid.spacing_x
        g = self._adjoint_factor.solve(terminal[1:-1])
        for j in range(n_x - 2, -1, -1):
            sensitivity[j + 1, 1:-1] += weight * g
            sensitivity[j, 1:-1] += weight * g
            if j > 0:
                g = self._adjoint_factor.solve(self._explicit_adjoint.matvec(g))
        return sensitivity


@lru_cache(maxsize=16)
def get_propagator(grid: Grid2D, params: WaveParams, diffusion: bool = True) -> EnvelopePropagator:
    """Shared propagator; factorizations are reused across calls."""
    return EnvelopePropagator(grid, params, diffusion)


def march_envelope(
    beta_slicewise: RealField | ComplexField,
    params: WaveParams,
    initial_slice: Optional[np.ndarray] = None,
    diffusion: bool = True,
) -> ComplexField:
    """Full envelope field driven by ``beta_slicewise`` (already in the view frame).

    Args:
        beta_slicewise: Source field; axis 0 is the propagation direction.
        params: Wave parameters; their side length must match the grid.
        initial_slice: Optional nonzero entry slice, for homogeneous checks.
        diffusion: Disable to obtain the straight-ray (Radon) limit.

    Raises:
        GridMismatch: If the grid and parameters disagree on L.
    """
    propagator = get_propagator(beta_slicewise.grid, params, diffusion)
    values = propagator.propagate(
        beta_slicewise.values, initial_slice=initial_slice, keep_field=True
    )
    return ComplexField(beta_slicewise.grid, values)
