"""Grid containers and the tridiagonal kernel shared by every module."""

from paraxial_tomo.core.grid import ComplexField, Field2D, Grid2D, RealField, l2_inner
from paraxial_tomo.core.tridiag import ThomasFactor, TridiagonalSystem, tridiag_solve

__all__ = [
    "ComplexField",
    "Field2D",
    "Grid2D",
    "RealField",
    "l2_inner",
    "ThomasFactor",
    "TridiagonalSystem",
    "tridiag_solve",
]
