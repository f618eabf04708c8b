"""Riccati, Jacobi-field and ray-transform kernels of the beam construction."""

from paraxial_tomo.beams.curvature import CurvatureProfile
from paraxial_tomo.beams.riccati import (
    C_MATRIX,
    RiccatiState,
    RiccatiTrajectory,
    c0_drift,
    conserved_c0,
    flat_solution,
    hessian,
    solve_yz,
)
from paraxial_tomo.beams.transforms import (
    Line2D,
    TransversalJacobi,
    ChordCheck,
    XRAY_OVERSAMPLE,
    XrayResult,
    field_sampler,
    jacobi_ray_transform,
    line_interval,
    xray_nodes,
    unit_disk_chords,
    xray_transform,
)

__all__ = [
    "CurvatureProfile",
    "C_MATRIX",
    "RiccatiState",
    "RiccatiTrajectory",
    "c0_drift",
    "conserved_c0",
    "flat_solution",
    "hessian",
    "solve_yz",
    "Line2D",
    "TransversalJacobi",
    "ChordCheck",
    "XRAY_OVERSAMPLE",
    "XrayResult",
    "field_sampler",
    "jacobi_ray_transform",
    "line_interval",
    "xray_nodes",
    "unit_disk_chords",
    "xray_transform",
]
