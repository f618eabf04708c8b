"""Explicit leapfrog solvers for the 1D Westervelt model and its linearizations.

The nonlinear update is

    p[n+1] = 2 p[n] - p[n-1]
             + dt^2 (D_xx p[n] + 2 beta ((p[n] - p[n-1]) / dt)^2) / (c^-2 - 2 beta p[n])

with Dirichlet data at both ends and two zero initial levels. With beta = 0
and no source it reduces to the linear stencil used for the incident and
receiver waves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from paraxial_tomo.errors import CFLViolation, CoefficientDegenerate, ShapeMismatch, ValueOutOfRange
from paraxial_tomo.utils.logging import get_logger
from paraxial_tomo.westervelt.config import VANISHING_MARGIN_STEPS, Westervelt1DConfig

logger = get_logger("westervelt.solver")

DEGENERATE_FRACTION = 0.1
WARN_FRACTION = 0.5
MAX_COURANT = 0.5

Pulse = Callable[[np.ndarray], np.ndarray]
Direction = Literal["forward", "backward"]
Side = Literal["left", "right"]


@dataclass(frozen=True, eq=False)
class WaveTrace1D:
    """Space-time samples p[n, i] and the outward normal derivatives at both ends."""

    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.p.shape != (self.t.size, self.x.size):
            raise ShapeMismatch(f"trace shape {self.p.shape} != ({self.t.size}, {self.x.size})")
        if not np.all(np.isfinite(self.p)):
            raise ValueOutOfRange("trace", "trace contains NaN or Inf")

    @property
    def spacing_x(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def time_step(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def dx_left(self) -> np.ndarray:
        """d/dx p at x = 0 by the one-sided three-point formula."""
        p = self.p
        return (-3.0 * p[:, 0] + 4.0 * p[:, 1] - p[:, 2]) / (2.0 * self.spacing_x)

    @property
    def dx_right(self) -> np.ndarray:
        """d/dx p at x = X by the one-sided three-point formula."""
        p = self.p
        return (3.0 * p[:, -1] - 4.0 * p[:, -2] + p[:, -3]) / (2.0 * self.spacing_x)

    @property
    def neumann_left(self) -> np.ndarray:
        """Outward normal derivative at x = 0 (normal points to -x)."""
        return -self.dx_left

    @property
    def neumann_right(self) -> np.ndarray:
        return self.dx_right

    def scaled(self, factor: float) -> "WaveTrace1D":
        return WaveTrace1D(self.t, self.x, self.p * factor)

    def reversed_in_time(self) -> "WaveTrace1D":
        return WaveTrace1D(self.t, self.x, self.p[::-1].copy())


def check_courant(config: Westervelt1DConfig) -> None:
    if config.courant > MAX_COURANT * (1 + 1e-12):
        raise CFLViolation(f"Courant number {config.courant:.4f} exceeds {MAX_COURANT}")


def boundary_samples(config: Westervelt1DConfig, pulse: Pulse, reverse: bool = False) -> np.ndarray:
    """Sample a boundary pulse on the time grid and check its quiet start."""
    t = config.t()
    times = config.final_time - t if reverse else t
    values = np.asarray(pulse(times), dtype=np.float64)
    if values.shape != t.shape:
        raise ShapeMismatch(f"pulse returned shape {values.shape}, expected {t.shape}")
    if np.any(values[:VANISHING_MARGIN_STEPS] != 0.0):
        raise ValueOutOfRange(
            "pulse", f"boundary data must vanish on the first {VANISHING_MARGIN_STEPS} steps"
        )
    return values


def _march(
    config: Westervelt1DConfig,
    left: np.ndarray,
    right: np.ndarray,
    beta: Optional[np.ndarray] = None,
    source: Optional[np.ndarray] = None,
) -> np.ndarray:
    check_courant(config)
    n_t, n_x = config.n_t, config.n_x
    dt = config.time_step
    dx2 = config.spacing_x**2
    inv_c2 = 1.0 / config.sound_speed**2
    if beta is None:
        beta = np.zeros(n_x)
    b = beta[1:-1]
    nonlinear = bool(np.any(b))
    warned = False

    p = np.zeros((n_t, n_x))
    p[:2, 0] = left[:2]
    p[:2, -1] = right[:2]
    for n in range(1, n_t - 1):
        current = p[n]
        previous = p[n - 1]
        rhs = (current[:-2] - 2.0 * current[1:-1] + current[2:]) / dx2
        coefficient = inv_c2
        if nonlinear:
            rate = (current[1:-1] - previous[1:-1]) / dt
            rhs = rhs + 2.0 * b * rate**2
            coefficient = inv_c2 - 2.0 * b * current[1:-1]
            lowest = float(np.min(coefficient))
            if lowest <= DEGENERATE_FRACTION * inv_c2:
                raise CoefficientDegenerate(n, lowest)
            if lowest < WARN_FRACTION * inv_c2 and not warned:
                logger.warning("coefficient_near_degenerate", step=n, coefficient=lowest)
                warned = True
        if source is not None:
            rhs = rhs + source[n, 1:-1]
        p[n + 1, 1:-1] = 2.0 * current[1:-1] - previous[1:-1] + dt * dt * rhs / coefficient
        p[n + 1, 0] = left[n + 1]
        p[n + 1, -1] = right[n + 1]
    return p


def solve_nonlinear(config: Westervelt1DConfig, f: Pulse, amplitude: float) -> WaveTrace1D:
    """Westervelt solve driven by p(t, 0) = amplitude * f(t), p(t, X) = 0.

    Raises:
        CoefficientDegenerate: If c^-2 - 2 beta p falls to 0.1 c^-2.
        CFLViolation: If the Courant number exceeds 0.5.
    """
    left = amplitude * boundary_samples(config, f)
    p = _march(config, left, np.zeros_like(left), beta=config.beta())
    return WaveTrace1D(config.t(), config.x(), p)


def solve_linear(
    config: Westervelt1DConfig,
    f: Pulse,
    direction: Direction = "forward",
    side: Side = "left",
) -> WaveTrace1D:
    """Linear wave solve with Dirichlet data f on one side and 0 on the other.

    The backward direction imposes zero terminal levels at t = T: the
    forward recursion is run on the time-reversed data and the result is
    reversed again, which the leapfrog stencil allows exactly.

    Raises:
        CFLViolation: If the Courant number exceeds 0.5.
    """
    if direction not in ("forward", "backward"):
        raise ValueOutOfRange("direction", f"expected forward or backward, got '{direction}'")
    if side not in ("left", "right"):
        raise ValueOutOfRange("side", f"expected left or right, got '{side}'")
    data = boundary_samples(config, f, reverse=direction == "backward")
    zero = np.zeros_like(data)
    left, right = (data, zero) if side == "left" else (zero, data)
    p = _march(config, left, right)
    if direction == "backward":
        p = p[::-1].copy()
    return WaveTrace1D(config.t(), config.x(), p)


def solve_sourced(config: Westervelt1DConfig, source: np.ndarray) -> WaveTrace1D:
    """Linear wave solve c^-2 U_tt - U_xx = source with zero boundary and initial data."""
    source = np.asarray(source, dtype=np.float64)
    if source.shape != (config.n_t, config.n_x):
        raise ShapeMismatch(f"source shape {source.shape} != {(config.n_t, config.n_x)}")
    zero = np.zeros(config.n_t)
    p = _march(config, zero, zero, source=source)
    return WaveTrace1D(config.t(), config.x(), p)


def discrete_energy(trace: WaveTrace1D, sound_speed: float = 1.0) -> np.ndarray:
    """Leapfrog energy at half steps n + 1/2.

    E = 1/2 sum(c^-2 ((p[n+1] - p[n]) / dt)^2 + D+p[n+1] D+p[n]) dx, conserved
    by the linear scheme while the boundary data vanish.
    """
    p = trace.p
    dt = trace.time_step
    dx = trace.spacing_x
    kinetic = np.sum(((p[1:] - p[:-1]) / dt) ** 2, axis=1) / sound_speed**2
    gradient = np.diff(p, axis=1) / dx
    potential = np.sum(gradient[1:] * gradient[:-1], axis=1)
    return 0.5 * (kinetic + potential) * dx
