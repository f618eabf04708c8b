"""WVSG binary sinogram files.

Layout (little-endian): magic ``WVSG``, u32 version (1), u32 n_angles,
u32 n_y, f64 length_L, f64 l_over_lambda, f64 angles[n_angles], then
n_angles * n_y row-major complex values as (re, im) f64 pairs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

from paraxial_tomo.errors import CorruptHeader, InputError, TruncatedPayload, ValueOutOfRange
from paraxial_tomo.paraxial.params import Sinogram, WaveParams
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("formats.wvsg")

MAGIC = b"WVSG"
VERSION = 1

HEADER = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u4"),
        ("n_angles", "<u4"),
        ("n_y", "<u4"),
        ("length_L", "<f8"),
        ("l_over_lambda", "<f8"),
    ]
)

ANGLE_DTYPE = np.dtype("<f8")
VALUE_DTYPE = np.dtype("<c16")


def write_wvsg(path: Union[str, Path], sino: Sinogram) -> Path:
    """Serialize a sinogram.

    Raises:
        ValueOutOfRange: If angles or values are not finite.
    """
    if not (np.all(np.isfinite(sino.values)) and np.all(np.isfinite(sino.angles))):
        raise ValueOutOfRange("values", "refusing to write NaN or Inf")

    header = np.zeros((), dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["n_angles"] = sino.n_angles
    header["n_y"] = sino.n_y
    header["length_L"] = sino.params.length_L
    header["l_over_lambda"] = sino.params.l_over_lambda

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(sino.angles.astype(ANGLE_DTYPE).tobytes())
        f.write(np.ascontiguousarray(sino.values.astype(VALUE_DTYPE)).tobytes())

    logger.debug("wvsg_written", path=str(path), n_angles=sino.n_angles, n_y=sino.n_y)
    return path


def read_wvsg(path: Union[str, Path]) -> Sinogram:
    """Load a sinogram written by ``write_wvsg``.

    Raises:
        CorruptHeader: Bad magic or version, empty angle set, invalid
            parameters, trailing bytes or invalid payload.
        TruncatedPayload: File shorter than the header announces.
    """
    path = Path(path)
    buffer = path.read_bytes()
    if len(buffer) < HEADER.itemsize:
        raise CorruptHeader(f"{path}: file too short for a WVSG header")

    header = np.frombuffer(buffer, dtype=HEADER, count=1)[0]
    if header["magic"] != MAGIC:
        raise CorruptHeader(f"{path}: bad magic {bytes(header['magic'])!r}")
    if int(header["version"]) != VERSION:
        raise CorruptHeader(f"{path}: unsupported version {int(header['version'])}")
    n_angles = int(header["n_angles"])
    n_y = int(header["n_y"])
    if n_angles == 0:
        raise CorruptHeader(f"{path}: sinogram has no angles")
    if n_y < 2:
        raise CorruptHeader(f"{path}: sinogram rows need at least two samples, got {n_y}")

    expected = HEADER.itemsize + n_angles * ANGLE_DTYPE.itemsize + n_angles * n_y * VALUE_DTYPE.itemsize
    if len(buffer) < expected:
        raise TruncatedPayload(f"{path}: expected {expected} bytes, found {len(buffer)}")
    if len(buffer) > expected:
        raise CorruptHeader(f"{path}: {len(buffer) - expected} trailing bytes")

    angles = np.frombuffer(buffer, dtype=ANGLE_DTYPE, count=n_angles, offset=HEADER.itemsize)
    values = np.frombuffer(
        buffer,
        dtype=VALUE_DTYPE,
        count=n_angles * n_y,
        offset=HEADER.itemsize + n_angles * ANGLE_DTYPE.itemsize,
    ).reshape((n_angles, n_y))

    try:
        params = WaveParams(float(header["length_L"]), float(header["l_over_lambda"]))
        return Sinogram(angles, values, params)
    except InputError as exc:
        raise CorruptHeader(f"{path}: {exc}") from exc
