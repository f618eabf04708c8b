"""Binary PGM (P5) images, 8- and 16-bit.

Samples wider than one byte are big-endian per the netpbm definition. Image
rows correspond to the x index of a field, columns to the y index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Union

import numpy as np

from paraxial_tomo.core.grid import ComplexField, RealField
from paraxial_tomo.errors import CorruptHeader, TruncatedPayload, UnsupportedFormat, ValueOutOfRange
from paraxial_tomo.utils.logging import get_logger

if TYPE_CHECKING:
    from paraxial_tomo.paraxial.params import Sinogram

logger = get_logger("formats.pgm")

HEADER_PATTERN = re.compile(
    rb"(^P5\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s)"
)


@dataclass(frozen=True, eq=False)
class PgmImage:
    """Raw integer samples (height x width) with their declared maximum."""

    samples: np.ndarray = field(repr=False)
    maxval: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.samples.shape

    def as_unit(self) -> np.ndarray:
        """Samples scaled to [0, 1] by the declared maximum."""
        return self.samples.astype(np.float64) / self.maxval


def is_pgm(buffer: bytes) -> bool:
    return buffer[:2] == b"P5"


def read_pgm(path: Union[str, Path]) -> PgmImage:
    """Read a P5 file.

    Raises:
        UnsupportedFormat: If the file is not a binary PGM.
        CorruptHeader: If the header is malformed.
        TruncatedPayload: If fewer samples than announced are present.
    """
    path = Path(path)
    buffer = path.read_bytes()
    if not is_pgm(buffer):
        raise UnsupportedFormat(f"{path}: not a binary PGM (P5) file")

    match = HEADER_PATTERN.search(buffer)
    if match is None:
        raise CorruptHeader(f"{path}: malformed PGM header")
    header, width, height, maxval = match.groups()
    width, height, maxval = int(width), int(height), int(maxval)
    if width < 1 or height < 1:
        raise CorruptHeader(f"{path}: empty image {width}x{height}")
    if not 0 < maxval < 65536:
        raise CorruptHeader(f"{path}: maxval {maxval} outside 1..65535")

    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    count = width * height
    available = len(buffer) - len(header)
    if available < count * dtype.itemsize:
        raise TruncatedPayload(
            f"{path}: expected {count * dtype.itemsize} sample bytes, found {available}"
        )

    samples = np.frombuffer(buffer, dtype=dtype, count=count, offset=len(header))
    samples = samples.reshape((height, width)).astype(np.uint16)
    if samples.max(initial=0) > maxval:
        raise CorruptHeader(f"{path}: sample exceeds maxval {maxval}")
    return PgmImage(samples=samples, maxval=maxval)


def write_pgm(path: Union[str, Path], samples: np.ndarray, maxval: int = 65535) -> Path:
    """Write integer samples as P5.

    Raises:
        ValueOutOfRange: If samples are non-finite, negative, non-integral or
            above ``maxval``, or ``maxval`` is outside 1..65535.
    """
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.size == 0:
        raise ValueOutOfRange("samples", f"need a non-empty 2D array, got shape {samples.shape}")
    if not 0 < maxval < 65536:
        raise ValueOutOfRange("maxval", f"{maxval} outside 1..65535")
    if not np.all(np.isfinite(samples)):
        raise ValueOutOfRange("samples", "refusing to write NaN or Inf")
    if np.any(samples < 0) or np.any(samples > maxval) or np.any(samples != np.round(samples)):
        raise ValueOutOfRange("samples", f"samples must be integers in 0..{maxval}")

    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    height, width = samples.shape
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(f"P5\n{width} {height}\n{maxval}\n".encode("ascii"))
        f.write(samples.astype(dtype).tobytes())
    return path


def quantize_unit(values: np.ndarray, bits: int = 16) -> tuple[np.ndarray, int]:
    """Quantize values in [0, 1] to 8- or 16-bit integer samples."""
    if bits not in (8, 16):
        raise ValueOutOfRange("bits", f"PGM depth must be 8 or 16, got {bits}")
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ValueOutOfRange("values", "refusing to write NaN or Inf")
    maxval = (1 << bits) - 1
    samples = np.round(np.clip(values, 0.0, 1.0) * maxval)
    return samples, maxval


def save_unit_pgm(path: Union[str, Path], field: RealField, bits: int = 16) -> Path:
    """Write a field with values in [0, 1] without windowing."""
    samples, maxval = quantize_unit(field.values, bits)
    return write_pgm(path, samples, maxval)


def render_pgm(
    path: Union[str, Path],
    field: Union[RealField, ComplexField, Sinogram],
    bits: int = 16,
) -> tuple[Path, Path]:
    """Render a field or sinogram with the linear window [min, max].

    Complex data is rendered by modulus; sinogram rows are view angles.
    The window is recorded next to the image in ``<stem>.window.txt``.

    Returns:
        Paths of the image and its sidecar.
    """
    values = np.abs(field.values) if np.iscomplexobj(field.values) else field.values
    lo = float(values.min())
    hi = float(values.max())
    span = hi - lo
    unit = (values - lo) / span if span > 0 else np.zeros_like(values)
    samples, maxval = quantize_unit(unit, bits)

    image_path = write_pgm(path, samples, maxval)
    sidecar = image_path.with_name(image_path.stem + ".window.txt")
    sidecar.write_text(f"window_min = {lo!r}\nwindow_max = {hi!r}\n", encoding="utf-8")
    logger.debug("pgm_rendered", path=str(image_path), window_min=lo, window_max=hi)
    return image_path, sidecar
