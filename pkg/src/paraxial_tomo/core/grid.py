"""Uniform node-centered grids and the field containers living on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np

from paraxial_tomo.errors import GridMismatch, ShapeMismatch, ValueOutOfRange


@dataclass(frozen=True)
class Grid2D:
    """Square domain (-L/2, L/2)^2 sampled at n_x by n_y nodes, boundary included.

    Axis 0 of every field is the propagation coordinate x, axis 1 the
    transverse coordinate y. Node (i, j) sits at
    (-L/2 + i * spacing_x, -L/2 + j * spacing_y).
    """

    n_x: int
    n_y: int
    length_L: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n_x) != self.n_x or self.n_x < 2:
            raise ValueOutOfRange("grid.n_x", f"need an integer >= 2, got {self.n_x}")
        if int(self.n_y) != self.n_y or self.n_y < 2:
            raise ValueOutOfRange("grid.n_y", f"need an integer >= 2, got {self.n_y}")
        if not np.isfinite(self.length_L) or self.length_L <= 0:
            raise ValueOutOfRange("grid.length", f"need a positive length, got {self.length_L}")
        object.__setattr__(self, "n_x", int(self.n_x))
        object.__setattr__(self, "n_y", int(self.n_y))
        object.__setattr__(self, "length_L", float(self.length_L))

    @classmethod
    def square(cls, n: int, length_L: float = 1.0) -> "Grid2D":
        return cls(n_x=n, n_y=n, length_L=length_L)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_x, self.n_y)

    @property
    def spacing_x(self) -> float:
        return self.length_L / (self.n_x - 1)

    @property
    def spacing_y(self) -> float:
        return self.length_L / (self.n_y - 1)

    @property
    def cell_measure(self) -> float:
        """Area weight dx * dy carried by each node in inner products."""
        return self.spacing_x * self.spacing_y

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-0.5 * self.length_L, 0.5 * self.length_L, self.n_x)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(-0.5 * self.length_L, 0.5 * self.length_L, self.n_y)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (X, Y) coordinate arrays of shape (n_x, n_y)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def require_same(self, other: "Grid2D", what: str = "field") -> None:
        """Raise GridMismatch unless ``other`` describes the same nodes."""
        if (
            self.n_x != other.n_x
            or self.n_y != other.n_y
            or not np.isclose(self.length_L, other.length_L, rtol=1e-12, atol=0.0)
        ):
            raise GridMismatch(f"{what} grid {other} does not match {self}")


def _frozen_array(values: Any, dtype: type, grid: Grid2D) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    if array.shape != grid.shape:
        if array.size == grid.n_x * grid.n_y and array.ndim == 1:
            array = array.reshape(grid.shape)
        else:
            raise ShapeMismatch(f"values have shape {array.shape}, grid expects {grid.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueOutOfRange("values", "field contains NaN or Inf")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RealField:
    """Real scalar field on a grid; values are read-only float64."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if np.iscomplexobj(self.values):
            raise ValueOutOfRange("values", "real field given complex values")
        object.__setattr__(self, "values", _frozen_array(self.values, np.float64, self.grid))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "RealField":
        return cls(grid, np.zeros(grid.shape))

    @property
    def cell_measure(self) -> float:
        return self.grid.cell_measure

    def with_values(self, values: np.ndarray) -> "RealField":
        return RealField(self.grid, values)

    def norm(self) -> float:
        return float(np.sqrt(l2_inner(self, self).real))

    def __add__(self, other: "RealField") -> "RealField":
        self.grid.require_same(other.grid)
        return RealField(self.grid, self.values + other.values)

    def __mul__(self, scale: float) -> "RealField":
        return RealField(self.grid, self.values * float(scale))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex scalar field on a grid; values are read-only complex128."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_array(self.values, np.complex128, self.grid))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "ComplexField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @property
    def cell_measure(self) -> float:
        return self.grid.cell_measure

    @property
    def real(self) -> RealField:
        return RealField(self.grid, self.values.real)

    def modulus(self) -> RealField:
        return RealField(self.grid, np.abs(self.values))

    def norm(self) -> float:
        return float(np.sqrt(l2_inner(self, self).real))


Field2D = Union[RealField, ComplexField]


def l2_inner(a: Any, b: Any, measure: Optional[float] = None) -> complex:
    """Weighted L2 pairing sum(a * conj(b)) * measure.

    Args:
        a: Field, sinogram or plain array.
        b: Same kind and shape as ``a``.
        measure: Cell measure; taken from ``a.cell_measure`` when omitted and
            ``a`` carries one, otherwise 1.

    Returns:
        The pairing, conjugate-linear in ``b``.

    Raises:
        ShapeMismatch: If the value arrays differ in shape.
        GridMismatch: If both operands are fields on different grids.
    """
    grid_a = getattr(a, "grid", None)
    grid_b = getattr(b, "grid", None)
    if isinstance(grid_a, Grid2D) and isinstance(grid_b, Grid2D):
        grid_a.require_same(grid_b)

    values_a = np.asarray(getattr(a, "values", a))
    values_b = np.asarray(getattr(b, "values", b))
    if values_a.shape != values_b.shape:
        raise ShapeMismatch(f"cannot pair shapes {values_a.shape} and {values_b.shape}")

    if measure is None:
        measure = getattr(a, "cell_measure", None) or getattr(b, "cell_measure", None) or 1.0

    # np.vdot conjugates its first argument
    return complex(np.vdot(values_b, values_a)) * float(measure)
