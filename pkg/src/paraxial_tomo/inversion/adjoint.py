"""Exact discrete adjoint of the forward map.

Each sinogram row is pushed backwards through the conjugate-transposed
Crank-Nicolson recurrence, the resulting source sensitivity is scattered
back by the transposed rotation, and views are summed with the rectangle
weight. Pairings use the field measure dx*dy on one side and the sinogram
measure d(theta)*dy on the other.
"""

from __future__ import annotations

import time
from typing import Literal, NamedTuple, Optional

import numpy as np

from paraxial_tomo.core.grid import ComplexField, Grid2D, RealField, l2_inner
from paraxial_tomo.errors import GridMismatch, ValueOutOfRange
from paraxial_tomo.paraxial.forward import ANGLE_BLOCK, forward_map
from paraxial_tomo.paraxial.march import check_length, get_propagator
from paraxial_tomo.paraxial.params import Sinogram, WaveParams
from paraxial_tomo.phantom.rotation import RotationOperator
from paraxial_tomo.utils.logging import get_logger
from paraxial_tomo.utils.parallel import chunk, map_ordered, pairwise_sum

logger = get_logger("inversion.adjoint")

ImagePart = Literal["real", "modulus"]


def image_grid(sino: Sinogram, params: WaveParams, grid: Optional[Grid2D] = None) -> Grid2D:
    """Grid of the back-projected image; square with n = n_y unless given."""
    if grid is None:
        grid = Grid2D.square(sino.n_y, params.length_L)
    if grid.n_y != sino.n_y:
        raise GridMismatch(f"image grid has n_y={grid.n_y}, sinogram rows have {sino.n_y}")
    check_length(grid, params)
    return grid


def adjoint_map_complex(
    sino: Sinogram,
    params: Optional[WaveParams] = None,
    grid: Optional[Grid2D] = None,
    diffusion: bool = True,
    workers: int = 1,
) -> ComplexField:
    """Conjugate transpose of ``forward_map`` under the weighted pairings.

    Raises:
        GridMismatch: If ``params`` disagree with the sinogram or the grid.
    """
    if params is None:
        params = sino.params
    if params != sino.params:
        raise GridMismatch(f"wave parameters {params} do not match sinogram {sino.params}")
    grid = image_grid(sino, params, grid)
    propagator = get_propagator(grid, params, diffusion)
    blocks = chunk(np.arange(sino.n_angles), ANGLE_BLOCK)

    def run_block(indices: np.ndarray) -> np.ndarray:
        sensitivity = propagator.back_propagate(sino.values[indices].T)
        partial = np.zeros(grid.shape, dtype=np.complex128)
        for column, index in enumerate(indices):
            op = RotationOperator.build(sino.angles[index], grid)
            partial += op.apply_transpose(sensitivity[..., column])
        return partial

    started = time.perf_counter()
    partials = map_ordered(run_block, blocks, workers)
    values = pairwise_sum(partials) * (sino.angle_weight / grid.spacing_x)
    logger.info(
        "adjoint_map_done",
        angles=sino.n_angles,
        n=grid.n_y,
        seconds=round(time.perf_counter() - started, 3),
    )
    return ComplexField(grid, values)


def adjoint_map(
    sino: Sinogram,
    params: Optional[WaveParams] = None,
    part: ImagePart = "real",
    grid: Optional[Grid2D] = None,
    workers: int = 1,
) -> RealField:
    """Back-projected image: real part (default) or modulus of the complex adjoint."""
    field = adjoint_map_complex(sino, params, grid=grid, workers=workers)
    if part == "real":
        return field.real
    if part == "modulus":
        return field.modulus()
    raise ValueOutOfRange("recon.part", f"expected 'real' or 'modulus', got '{part}'")


class DotTest(NamedTuple):
    forward_pairing: complex
    adjoint_pairing: complex
    relative_gap: float


def adjoint_dot_test(
    grid: Grid2D,
    angles: np.ndarray,
    params: WaveParams,
    seed: int,
    workers: int = 1,
) -> DotTest:
    """Compare <W beta, eta> with <beta, W* eta> for seeded random complex data.

    The gap is normalized by ||beta|| ||eta|| in the same weighted norms.
    """
    rng = np.random.default_rng(seed)
    beta = ComplexField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    shape = (len(angles), grid.n_y)
    eta = Sinogram(
        np.asarray(angles, dtype=np.float64),
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape),
        params,
    )

    forward_pairing = l2_inner(forward_map(beta, angles, params, workers=workers), eta)
    adjoint_pairing = l2_inner(beta, adjoint_map_complex(eta, params, grid=grid, workers=workers))
    gap = abs(forward_pairing - adjoint_pairing) / (beta.norm() * eta.norm())
    logger.info("adjoint_dot_test", n=grid.n_y, angles=len(angles), seed=seed, gap=gap)
    return DotTest(forward_pairing, adjoint_pairing, float(gap))
