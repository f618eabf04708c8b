"""Paraxial forward model: envelope march and finite-frequency sinograms."""

from paraxial_tomo.paraxial.params import Sinogram, WaveParams, angle_weight, uniform_angles
from paraxial_tomo.paraxial.march import EnvelopePropagator, get_propagator, march_envelope
from paraxial_tomo.paraxial.forward import forward_map

__all__ = [
    "Sinogram",
    "WaveParams",
    "angle_weight",
    "uniform_angles",
    "EnvelopePropagator",
    "get_propagator",
    "march_envelope",
    "forward_map",
]
