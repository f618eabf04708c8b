"""Phantom generation, raster ingestion and the rotation operator."""

from paraxial_tomo.phantom.shapes import (
    MARGIN_CELLS,
    Phantom,
    disk,
    gaussian_bump,
    make_phantom,
    shepp_logan,
    zero_margin,
)
from paraxial_tomo.phantom.rotation import RotationOperator, rotate, rotate_transpose
from paraxial_tomo.phantom.raster import load_raster

__all__ = [
    "MARGIN_CELLS",
    "Phantom",
    "disk",
    "gaussian_bump",
    "make_phantom",
    "shepp_logan",
    "zero_margin",
    "RotationOperator",
    "rotate",
    "rotate_transpose",
    "load_raster",
]
