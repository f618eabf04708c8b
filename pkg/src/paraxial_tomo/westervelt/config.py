"""Configuration of the one-dimensional Westervelt identity check."""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

MIN_POINTS_PER_PERIOD = 20
VANISHING_MARGIN_STEPS = 5


def smooth_bump(s: np.ndarray) -> np.ndarray:
    """C-infinity bump exp(1 - 1 / (1 - s^2)) on |s| < 1, zero elsewhere; peak 1 at s = 0."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


class Westervelt1DConfig(BaseModel):
    """Domain [0, X], constant sound speed, a Gaussian beta bump and boundary pulses.

    The incident pulses f1 = f2 enter at x = 0. The receiver pulse f0 is the
    square of the incident pulse delayed by the transit time X / c and is
    prescribed at x = X, so the backward wave it drives overlaps the second harmonic
    generated inside the bump.
    """

    model_config = ConfigDict(frozen=True)

    length_X: float = Field(default=1.0, gt=0.0)
    sound_speed: float = Field(default=1.0, gt=0.0)
    beta_amplitude: float = 1.0
    beta_center: float = 0.5
    beta_width: float = Field(default=0.05, gt=0.0)
    beta_support_radius: float = Field(default=0.4, gt=0.0)
    final_time: float = Field(default=1.6, gt=0.0)
    n_x: int = Field(default=400, ge=8)
    cfl: float = Field(default=0.5, gt=0.0)
    pulse_center: float = Field(default=0.25, gt=0.0)
    pulse_half_width: float = Field(default=0.15, gt=0.0)
    carrier_frequency: float = Field(default=5.0, gt=0.0)
    eps1: float = Field(default=1e-3, gt=0.0)
    eps2: float = Field(default=1e-3, gt=0.0)

    @model_validator(mode="after")
    def check_geometry(self) -> "Westervelt1DConfig":
        if self.final_time <= self.transit_time:
            raise ValueError(
                f"final time {self.final_time} must exceed the transit time {self.transit_time}"
            )
        lo = self.beta_center - self.beta_support_radius
        hi = self.beta_center + self.beta_support_radius
        if lo <= 0.0 or hi >= self.length_X:
            raise ValueError(f"beta support [{lo}, {hi}] must lie inside (0, {self.length_X})")

        dt = self.time_step
        margin = VANISHING_MARGIN_STEPS * dt
        if self.pulse_center - self.pulse_half_width < margin:
            raise ValueError("incident pulse must vanish on the first time steps")
        if self.receiver_center + self.pulse_half_width > self.final_time - margin:
            raise ValueError("receiver pulse must vanish on the last time steps")
        if 1.0 / (self.carrier_frequency * dt) < MIN_POINTS_PER_PERIOD:
            raise ValueError(
                f"need >= {MIN_POINTS_PER_PERIOD} time samples per carrier period"
            )
        return self

    @property
    def transit_time(self) -> float:
        return self.length_X / self.sound_speed

    @property
    def spacing_x(self) -> float:
        return self.length_X / (self.n_x - 1)

    @property
    def n_t(self) -> int:
        """Number of time levels, including t = 0 and t = T."""
        return math.ceil(self.final_time * self.sound_speed / (self.cfl * self.spacing_x)) + 1

    @property
    def time_step(self) -> float:
        return self.final_time / (self.n_t - 1)

    @property
    def courant(self) -> float:
        return self.sound_speed * self.time_step / self.spacing_x

    @property
    def receiver_center(self) -> float:
        return self.pulse_center + self.transit_time

    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.length_X, self.n_x)

    def t(self) -> np.ndarray:
        return np.linspace(0.0, self.final_time, self.n_t)

    def beta(self) -> np.ndarray:
        """Gaussian bump with a smooth cut-off beyond ``beta_support_radius``."""
        x = self.x()
        gaussian = np.exp(-0.5 * ((x - self.beta_center) / self.beta_width) ** 2)
        return self.beta_amplitude * gaussian * smooth_bump((x - self.beta_center) / self.beta_support_radius)

    def incident_pulse(self, t: np.ndarray) -> np.ndarray:
        """f1 = f2: smooth envelope times a sine carrier."""
        t = np.asarray(t, dtype=np.float64)
        envelope = smooth_bump((t - self.pulse_center) / self.pulse_half_width)
        return envelope * np.sin(2.0 * np.pi * self.carrier_frequency * (t - self.pulse_center))

    def receiver_pulse(self, t: np.ndarray) -> np.ndarray:
        """f0: the squared incident pulse delayed by X / c."""
        return self.incident_pulse(np.asarray(t) - self.transit_time) ** 2

    def refined(self, n_x: int) -> "Westervelt1DConfig":
        """Same configuration on a different spatial grid (revalidated)."""
        return self.model_validate({**self.model_dump(), "n_x": n_x})

    def with_eps(self, eps1: float, eps2: float | None = None) -> "Westervelt1DConfig":
        update = {"eps1": eps1, "eps2": eps1 if eps2 is None else eps2}
        return self.model_validate({**self.model_dump(), **update})
