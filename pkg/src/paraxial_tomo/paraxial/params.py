"""Physical parameters of the transmission experiment and the sinogram container."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from paraxial_tomo.errors import ShapeMismatch, ValueOutOfRange

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class WaveParams:
    """Domain side L and the ratio L / lambda of the probing wave.

    The wavenumber is that of the fundamental, k = 2 pi (L / lambda) / L; the
    envelope being marched is the second harmonic, which enters only through
    the 1 / (4 i k) diffusion coefficient.
    """

    length_L: float
    l_over_lambda: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.length_L) or self.length_L <= 0:
            raise ValueOutOfRange("grid.length", f"need a positive length, got {self.length_L}")
        if not np.isfinite(self.l_over_lambda) or self.l_over_lambda <= 0:
            raise ValueOutOfRange(
                "wave.l_over_lambda", f"need a positive ratio, got {self.l_over_lambda}"
            )
        object.__setattr__(self, "length_L", float(self.length_L))
        object.__setattr__(self, "l_over_lambda", float(self.l_over_lambda))

    @property
    def wavelength(self) -> float:
        return self.length_L / self.l_over_lambda

    @property
    def wavenumber(self) -> float:
        return TWO_PI * self.l_over_lambda / self.length_L

    k = wavenumber


def uniform_angles(count: int, step_deg: Optional[float] = None) -> np.ndarray:
    """Equally spaced view angles in radians, starting at 0.

    Args:
        count: Number of views.
        step_deg: Spacing in degrees; defaults to a full turn divided by ``count``.

    Raises:
        ValueOutOfRange: If ``count`` is not positive or the views wrap past 360 degrees.
    """
    if count < 1:
        raise ValueOutOfRange("angles.count", f"need at least one angle, got {count}")
    if step_deg is None:
        step_deg = 360.0 / count
    if step_deg <= 0:
        raise ValueOutOfRange("angles.step_deg", f"need a positive step, got {step_deg}")
    if (count - 1) * step_deg >= 360.0:
        raise ValueOutOfRange(
            "angles.step_deg", f"{count} views of {step_deg} degrees wrap past a full turn"
        )
    return np.deg2rad(step_deg * np.arange(count, dtype=np.float64))


def angle_weight(angles: np.ndarray) -> float:
    """Rectangle-rule weight of one view.

    Uniformly spaced sets use their spacing unless they cover the full turn,
    in which case (and for irregular or single-view sets) the weight is
    2 pi / n_angles.
    """
    n = len(angles)
    full_turn = TWO_PI / n
    if n < 2:
        return full_turn
    steps = np.diff(angles)
    if np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12) and steps[0] * n < TWO_PI * (1 - 1e-9):
        return float(steps[0])
    return full_turn


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Complex transmission data indexed by (view angle, transverse node)."""

    angles: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    params: WaveParams

    def __post_init__(self) -> None:
        angles = np.array(self.angles, dtype=np.float64, copy=True).ravel()
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if angles.size == 0:
            raise ValueOutOfRange("angles", "sinogram needs at least one angle")
        if np.any(~np.isfinite(angles)) or angles[0] < 0 or angles[-1] >= TWO_PI:
            raise ValueOutOfRange("angles", "angles must lie in [0, 2 pi)")
        if np.any(np.diff(angles) <= 0):
            raise ValueOutOfRange("angles", "angles must be strictly increasing")
        if values.ndim != 2 or values.shape[0] != angles.size:
            raise ShapeMismatch(
                f"values have shape {values.shape}, expected ({angles.size}, n_y)"
            )
        if values.shape[1] < 2:
            raise ShapeMismatch("sinogram rows need at least two transverse samples")
        if not np.all(np.isfinite(values)):
            raise ValueOutOfRange("values", "sinogram contains NaN or Inf")
        angles.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, angles: np.ndarray, n_y: int, params: WaveParams) -> "Sinogram":
        return cls(angles, np.zeros((len(angles), n_y), dtype=np.complex128), params)

    @property
    def n_angles(self) -> int:
        return self.values.shape[0]

    @property
    def n_y(self) -> int:
        return self.values.shape[1]

    @property
    def spacing_y(self) -> float:
        return self.params.length_L / (self.n_y - 1)

    @property
    def angle_weight(self) -> float:
        return angle_weight(self.angles)

    @property
    def cell_measure(self) -> float:
        """Weight of one (angle, y) sample in the sinogram inner product."""
        return self.angle_weight * self.spacing_y

    def with_values(self, values: np.ndarray) -> "Sinogram":
        return Sinogram(self.angles, values, self.params)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_measure))
