"""Ramp filtering, the discrete adjoint and filtered back-projection."""

from paraxial_tomo.inversion.filters import RampFilterSpec, ramp_filter, ramp_profile
from paraxial_tomo.inversion.adjoint import (
    DotTest,
    adjoint_dot_test,
    adjoint_map,
    adjoint_map_complex,
    image_grid,
)
from paraxial_tomo.inversion.metrics import (
    ImageMetrics,
    metrics,
    normalized_cross_correlation,
    psnr_unit,
)
from paraxial_tomo.inversion.reconstruct import (
    ReconReport,
    calibrate_scale,
    filtered_backprojection,
    reconstruct,
)

__all__ = [
    "RampFilterSpec",
    "ramp_filter",
    "ramp_profile",
    "DotTest",
    "adjoint_dot_test",
    "adjoint_map",
    "image_grid",
    "adjoint_map_complex",
    "ImageMetrics",
    "metrics",
    "normalized_cross_correlation",
    "psnr_unit",
    "ReconReport",
    "calibrate_scale",
    "filtered_backprojection",
    "reconstruct",
]
