"""Analytic nonlinearity phantoms.

Every generator returns a ``Phantom`` whose values lie in [0, 1] and vanish
on a boundary margin, so the coefficient is compactly supported in the
domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from paraxial_tomo.core import Grid2D, RealField
from paraxial_tomo.errors import ValueOutOfRange
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("phantom.shapes")

MARGIN_CELLS = 2

# Modified Shepp-Logan table (higher-contrast intensities):
# intensity, semi-axis along x, semi-axis along y, center x, center y, tilt in degrees.
SHEPP_LOGAN_ELLIPSES = np.array(
    [
        [1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0],
        [-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0],
        [-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0],
        [-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0],
        [0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0],
        [0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0],
        [0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0],
        [0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0],
        [0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0],
        [0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0],
    ]
)

# Intensity column of the original (low-contrast) table, same ellipse order.
SHEPP_LOGAN_ORIGINAL_INTENSITIES = np.array(
    [2.0, -0.98, -0.02, -0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01]
)

# The unit square of the table is mapped onto this fraction of the half-width.
SHEPP_LOGAN_EXTENT = 0.9


@dataclass(frozen=True, eq=False)
class Phantom:
    """A named nonlinearity map with values in [0, 1] and a zero boundary margin."""

    field: RealField
    name: str

    def __post_init__(self) -> None:
        values = self.field.values
        if values.min() < -1e-12 or values.max() > 1.0 + 1e-12:
            raise ValueOutOfRange("phantom", "values must lie in [0, 1]")
        m = MARGIN_CELLS
        rim = np.concatenate(
            [values[:m].ravel(), values[-m:].ravel(), values[:, :m].ravel(), values[:, -m:].ravel()]
        )
        if np.any(rim != 0.0):
            raise ValueOutOfRange("phantom", f"values must vanish on a {m}-cell margin")

    @property
    def grid(self) -> Grid2D:
        return self.field.grid

    @property
    def values(self) -> np.ndarray:
        return self.field.values


def zero_margin(values: np.ndarray, cells: int = MARGIN_CELLS) -> np.ndarray:
    """Return a copy of ``values`` with ``cells`` boundary rows and columns zeroed."""
    out = np.array(values, dtype=np.float64, copy=True)
    if cells > 0:
        out[:cells] = 0.0
        out[-cells:] = 0.0
        out[:, :cells] = 0.0
        out[:, -cells:] = 0.0
    return out


def normalize_unit(values: np.ndarray) -> np.ndarray:
    """Clip negatives (round-off of overlapping ellipses) and scale the maximum to 1."""
    out = np.clip(values, 0.0, None)
    peak = out.max()
    if peak > 0:
        out = out / peak
    return out


def shepp_logan(grid: Grid2D, original: bool = False) -> Phantom:
    """Ten-ellipse Shepp-Logan phantom scaled into [0, 1].

    Uses the modified, higher-contrast intensities by default (brain 0.2
    of the skull). ``original=True`` switches to the original table, whose
    soft-tissue steps of 0.01 against a skull of 2.0 are barely visible
    after normalization.

    The table's unit square covers the central 90 % of the domain, so the
    outer ellipse sits inside the inscribed disk.
    """
    X, Y = grid.mesh()
    half = 0.5 * grid.length_L * SHEPP_LOGAN_EXTENT
    u = X / half
    v = Y / half

    table = SHEPP_LOGAN_ELLIPSES.copy()
    if original:
        table[:, 0] = SHEPP_LOGAN_ORIGINAL_INTENSITIES

    values = np.zeros(grid.shape)
    for intensity, a, b, x0, y0, tilt in table:
        phi = np.deg2rad(tilt)
        du = u - x0
        dv = v - y0
        along = du * np.cos(phi) + dv * np.sin(phi)
        across = dv * np.cos(phi) - du * np.sin(phi)
        inside = (along / a) ** 2 + (across / b) ** 2 <= 1.0
        values[inside] += intensity

    values = zero_margin(normalize_unit(values))
    logger.debug("shepp_logan_built", n_x=grid.n_x, n_y=grid.n_y, mass=float(values.sum()))
    return Phantom(RealField(grid, values), "shepp-logan")


def disk(
    grid: Grid2D,
    radius: Optional[float] = None,
    amplitude: float = 1.0,
    center: tuple[float, float] = (0.0, 0.0),
    edge_cells: float = 1.0,
) -> Phantom:
    """Uniform disk with a linear edge ramp ``edge_cells`` wide, centred on ``radius``.

    Args:
        grid: Target grid.
        radius: Disk radius; defaults to a quarter of the side length.
        amplitude: Interior value, in (0, 1].
        center: Disk center (x, y).
        edge_cells: Width of the linear ramp in grid cells; 0 gives a sharp edge.
    """
    if radius is None:
        radius = 0.25 * grid.length_L
    if radius <= 0:
        raise ValueOutOfRange("phantom.radius", f"need a positive radius, got {radius}")
    if not 0 < amplitude <= 1:
        raise ValueOutOfRange("phantom.amplitude", f"need 0 < amplitude <= 1, got {amplitude}")

    X, Y = grid.mesh()
    r = np.hypot(X - center[0], Y - center[1])
    width = edge_cells * min(grid.spacing_x, grid.spacing_y)
    if width > 0:
        profile = np.clip((radius - r) / width + 0.5, 0.0, 1.0)
    else:
        profile = (r <= radius).astype(np.float64)

    values = zero_margin(amplitude * profile)
    return Phantom(RealField(grid, values), "disk")


def gaussian_bump(
    grid: Grid2D,
    width: Optional[float] = None,
    center: tuple[float, float] = (0.0, 0.0),
) -> Phantom:
    """Smooth Gaussian bump of standard deviation ``width`` (default 0.07 L), peak 1."""
    if width is None:
        width = 0.07 * grid.length_L
    if width <= 0:
        raise ValueOutOfRange("phantom.width", f"need a positive width, got {width}")

    X, Y = grid.mesh()
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    values = zero_margin(np.exp(-0.5 * r2 / width**2))
    return Phantom(RealField(grid, values), "gaussian")


def make_phantom(kind: str, grid: Grid2D) -> Phantom:
    """Build one of the analytic phantoms by name."""
    builders = {
        "shepp-logan": shepp_logan,
        "disk": disk,
        "gaussian": gaussian_bump,
    }
    builder = builders.get(kind)
    if builder is None:
        raise ValueOutOfRange("phantom.kind", f"unknown phantom '{kind}'")
    return builder(grid)
