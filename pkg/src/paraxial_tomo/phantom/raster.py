"""Ingestion of external images as phantoms."""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

from paraxial_tomo.core.grid import ComplexField, Grid2D, RealField
from paraxial_tomo.errors import UnsupportedFormat
from paraxial_tomo.formats.pgm import is_pgm, read_pgm
from paraxial_tomo.formats.rf64 import is_rf64, read_rf64
from paraxial_tomo.phantom.shapes import Phantom, zero_margin
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("phantom.raster")


def _decode(path: Path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(4)

    if is_pgm(magic):
        return read_pgm(path).as_unit()

    if is_rf64(magic):
        field = read_rf64(path)
        if isinstance(field, ComplexField):
            raise UnsupportedFormat(f"{path}: phantoms must be real RF64 fields")
        return np.array(field.values)

    try:
        with Image.open(path) as image:
            if image.mode not in ("L", "I", "I;16", "I;16B", "I;16L", "F"):
                image = image.convert("L")
            return np.asarray(image.convert("F"), dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a PGM, RF64 or decodable image") from exc


def resample_bilinear(image: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Sample ``image`` at the grid nodes, stretching its corners onto the domain corners."""
    height, width = image.shape
    rows = np.arange(grid.n_x) * ((height - 1) / (grid.n_x - 1))
    cols = np.arange(grid.n_y) * ((width - 1) / (grid.n_y - 1))
    R, C = np.meshgrid(rows, cols, indexing="ij")
    return ndimage.map_coordinates(image, [R, C], order=1, mode="nearest")


def rescale_unit(values: np.ndarray) -> np.ndarray:
    """Linear map of [min(0, min v), max v] onto [0, 1]; constant-zero input stays zero."""
    lo = min(0.0, float(values.min()))
    hi = float(values.max())
    if hi <= lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def load_raster(path: Union[str, Path], grid: Grid2D) -> Phantom:
    """Load a grayscale image as a phantom on ``grid``.

    PGM (P5) and real RF64 files are read natively; anything else is handed
    to Pillow (PNG, TIFF, ...). The image is resampled bilinearly, rescaled
    to [0, 1] and its boundary margin zeroed.

    Raises:
        UnsupportedFormat: If the file cannot be decoded.
        CorruptHeader: If a PGM or RF64 header is malformed.
    """
    path = Path(path)
    image = _decode(path)
    if image.ndim != 2 or min(image.shape) < 2:
        raise UnsupportedFormat(f"{path}: need a 2D image of at least 2x2, got {image.shape}")

    values = zero_margin(rescale_unit(resample_bilinear(image, grid)))
    logger.info("raster_loaded", path=str(path), source_shape=image.shape, n_x=grid.n_x, n_y=grid.n_y)
    return Phantom(RealField(grid, values), path.stem)
