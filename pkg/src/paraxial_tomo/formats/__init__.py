"""Readers and writers for field, sinogram, image and report files."""

from paraxial_tomo.formats.rf64 import read_rf64, write_rf64
from paraxial_tomo.formats.pgm import (
    PgmImage,
    read_pgm,
    render_pgm,
    save_unit_pgm,
    write_pgm,
)
from paraxial_tomo.formats.report import iter_assignments, read_report, write_report
from paraxial_tomo.formats.wvsg import read_wvsg, write_wvsg

__all__ = [
    "read_rf64",
    "write_rf64",
    "PgmImage",
    "read_pgm",
    "render_pgm",
    "save_unit_pgm",
    "write_pgm",
    "iter_assignments",
    "read_report",
    "write_report",
    "read_wvsg",
    "write_wvsg",
]
