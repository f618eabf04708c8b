"""RF64 binary field files.

Layout (little-endian): magic ``RF64``, u32 flags (bit 0 set for complex
payloads), u32 n_x, u32 n_y, f64 length_L, then n_x * n_y row-major values,
either f64 or (re, im) f64 pairs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

from paraxial_tomo.core.grid import ComplexField, Grid2D, RealField
from paraxial_tomo.errors import CorruptHeader, InputError, TruncatedPayload, ValueOutOfRange
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("formats.rf64")

MAGIC = b"RF64"
FLAG_COMPLEX = 0x1

HEADER = np.dtype(
    [
        ("magic", "S4"),
        ("flags", "<u4"),
        ("n_x", "<u4"),
        ("n_y", "<u4"),
        ("length_L", "<f8"),
    ]
)

REAL_DTYPE = np.dtype("<f8")
COMPLEX_DTYPE = np.dtype("<c16")


def write_rf64(path: Union[str, Path], field: Union[RealField, ComplexField]) -> Path:
    """Serialize a field.

    Raises:
        ValueOutOfRange: If the payload is not finite.
    """
    values = np.asarray(field.values)
    if not np.all(np.isfinite(values)):
        raise ValueOutOfRange("values", "refusing to write NaN or Inf")

    is_complex = isinstance(field, ComplexField) or np.iscomplexobj(values)
    header = np.zeros((), dtype=HEADER)
    header["magic"] = MAGIC
    header["flags"] = FLAG_COMPLEX if is_complex else 0
    header["n_x"] = field.grid.n_x
    header["n_y"] = field.grid.n_y
    header["length_L"] = field.grid.length_L

    payload = values.astype(COMPLEX_DTYPE if is_complex else REAL_DTYPE)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(payload).tobytes())

    logger.debug("rf64_written", path=str(path), complex=is_complex, shape=values.shape)
    return path


def read_rf64(path: Union[str, Path]) -> Union[RealField, ComplexField]:
    """Load a field written by ``write_rf64``.

    Raises:
        CorruptHeader: Bad magic, unknown flags, impossible dimensions,
            trailing bytes or non-finite payload.
        TruncatedPayload: File shorter than the header announces.
    """
    path = Path(path)
    buffer = path.read_bytes()
    if len(buffer) < HEADER.itemsize:
        raise CorruptHeader(f"{path}: file too short for an RF64 header")

    header = np.frombuffer(buffer, dtype=HEADER, count=1)[0]
    if header["magic"] != MAGIC:
        raise CorruptHeader(f"{path}: bad magic {bytes(header['magic'])!r}")
    flags = int(header["flags"])
    if flags & ~FLAG_COMPLEX:
        raise CorruptHeader(f"{path}: unknown flag bits {flags:#x}")
    length_L = float(header["length_L"])
    try:
        grid = Grid2D(int(header["n_x"]), int(header["n_y"]), length_L)
    except InputError as exc:
        raise CorruptHeader(f"{path}: {exc}") from exc

    dtype = COMPLEX_DTYPE if flags & FLAG_COMPLEX else REAL_DTYPE
    count = grid.n_x * grid.n_y
    expected = HEADER.itemsize + count * dtype.itemsize
    if len(buffer) < expected:
        raise TruncatedPayload(f"{path}: expected {expected} bytes, found {len(buffer)}")
    if len(buffer) > expected:
        raise CorruptHeader(f"{path}: {len(buffer) - expected} trailing bytes")

    values = np.frombuffer(buffer, dtype=dtype, count=count, offset=HEADER.itemsize)
    values = values.reshape(grid.shape)
    if not np.all(np.isfinite(values)):
        raise CorruptHeader(f"{path}: payload contains NaN or Inf")

    if flags & FLAG_COMPLEX:
        return ComplexField(grid, values)
    return RealField(grid, values)


def is_rf64(buffer: bytes) -> bool:
    return buffer[:4] == MAGIC
