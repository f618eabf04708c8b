"""Transverse ramp filtering of sinogram rows."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from paraxial_tomo.errors import TooFewSamples
from paraxial_tomo.paraxial.params import Sinogram

MIN_SAMPLES = 4


class RampFilterSpec(BaseModel):
    """Ram-Lak ramp, optionally Hann-apodized, with a cutoff relative to Nyquist."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["ramlak", "ramlak_hann"] = "ramlak"
    cutoff_fraction: float = Field(default=1.0, gt=0.0, le=1.0)


def ramp_profile(n_y: int, spacing_y: float, spec: RampFilterSpec) -> np.ndarray:
    """Real multiplier in FFT bin order: |omega| = 2 pi |f| with DC and out-of-band bins zeroed."""
    freq = np.abs(np.fft.fftfreq(n_y, d=spacing_y))
    cutoff = spec.cutoff_fraction * 0.5 / spacing_y
    profile = 2.0 * np.pi * freq
    if spec.kind == "ramlak_hann":
        profile = profile * 0.5 * (1.0 + np.cos(np.pi * freq / cutoff))
    # relative slack keeps the Nyquist bin at cutoff 1
    profile[freq > cutoff * (1.0 + 1e-12)] = 0.0
    return profile


def ramp_filter(sino: Sinogram, spec: RampFilterSpec) -> Sinogram:
    """Filter every angle row in y by the ramp multiplier.

    No zero padding is applied, so each DFT basis vector is an eigenvector
    with eigenvalue equal to the ramp at its bin.

    Raises:
        TooFewSamples: If rows have fewer than four samples.
    """
    if sino.n_y < MIN_SAMPLES:
        raise TooFewSamples(f"ramp filter needs at least {MIN_SAMPLES} samples, got {sino.n_y}")
    profile = ramp_profile(sino.n_y, sino.spacing_y, spec)
    spectrum = np.fft.fft(sino.values, axis=1)
    return sino.with_values(np.fft.ifft(spectrum * profile, axis=1))
