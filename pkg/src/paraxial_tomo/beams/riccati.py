"""Matrix Riccati equation of a Gaussian beam along a geodesic.

The Hessian H of the beam phase satisfies H' + H C H + D = 0 with the fixed
C = diag(0, 2, 2). Writing H = Z Y^-1 turns it into the linear system

    Y' = C Z,    Z' = -D Y,    Y(tau_min) = Y0,    Z(tau_min) = Y1,

which is integrated here with the classical fourth-order Runge-Kutta step.
For real symmetric D both Z^T Y - Y^T Z and Y^* Z - Z^* Y are conserved, so H
stays symmetric, Im H stays positive definite and
det(Im H) |det Y|^2 is constant along the trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from paraxial_tomo.beams.curvature import CurvatureProfile
from paraxial_tomo.errors import ConjugatePointOrBlowup, ValueOutOfRange
from paraxial_tomo.utils.logging import get_logger

logger = get_logger("beams.riccati")

C_MATRIX = np.diag([0.0, 2.0, 2.0])

SYMMETRY_TOLERANCE = 1e-10
DET_Y_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class RiccatiState:
    tau: float
    H: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class RiccatiTrajectory:
    """Samples of (Y, Z, H) at increasing tau."""

    taus: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.taus.size

    def __getitem__(self, index: int) -> RiccatiState:
        return RiccatiState(float(self.taus[index]), self.H[index], self.Y[index], self.Z[index])

    def __iter__(self) -> Iterator[RiccatiState]:
        for index in range(len(self)):
            yield self[index]


def hessian(Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """H = Z Y^-1, computed by a linear solve."""
    return np.linalg.solve(Y.T, Z.T).T


def check_state(tau: float, Y: np.ndarray, H: np.ndarray, require_positive: bool) -> None:
    """Raise ConjugatePointOrBlowup unless (Y, H) satisfy the trajectory invariants."""
    det_y = abs(np.linalg.det(Y))
    if not np.isfinite(det_y) or det_y < DET_Y_FLOOR:
        raise ConjugatePointOrBlowup(tau, f"|det Y| = {det_y:.3e}")
    norm_h = np.linalg.norm(H)
    if np.linalg.norm(H - H.T) > SYMMETRY_TOLERANCE * max(norm_h, 1e-300):
        raise ConjugatePointOrBlowup(tau, "H lost symmetry")
    if require_positive:
        imag = 0.5 * (H.imag + H.imag.T)
        smallest = float(np.linalg.eigvalsh(imag).min())
        if smallest <= 0.0:
            raise ConjugatePointOrBlowup(tau, f"Im H has eigenvalue {smallest:.3e}")


def _rk4_step(
    profile: CurvatureProfile, tau: float, h: float, Y: np.ndarray, Z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    D0 = profile(tau)
    Dm = profile(tau + 0.5 * h)
    D1 = profile(tau + h)

    kY1 = C_MATRIX @ Z
    kZ1 = -D0 @ Y
    kY2 = C_MATRIX @ (Z + 0.5 * h * kZ1)
    kZ2 = -Dm @ (Y + 0.5 * h * kY1)
    kY3 = C_MATRIX @ (Z + 0.5 * h * kZ2)
    kZ3 = -Dm @ (Y + 0.5 * h * kY2)
    kY4 = C_MATRIX @ (Z + h * kZ3)
    kZ4 = -D1 @ (Y + h * kY3)

    Y_next = Y + (h / 6.0) * (kY1 + 2.0 * kY2 + 2.0 * kY3 + kY4)
    Z_next = Z + (h / 6.0) * (kZ1 + 2.0 * kZ2 + 2.0 * kZ3 + kZ4)
    return Y_next, Z_next


def solve_yz(
    profile: CurvatureProfile,
    Y0: np.ndarray,
    Y1: np.ndarray,
    step: float,
    require_positive: bool = True,
) -> RiccatiTrajectory:
    """Integrate the Y/Z system over the profile's interval.

    The step is shrunk so that a whole number of steps fits the interval.
    Every sample is checked for the invariants of the Riccati solution.

    Args:
        profile: Curvature D(tau) and its interval.
        Y0: Initial Y (3x3 complex, nonsingular).
        Y1: Initial Z; the initial Hessian is Y1 Y0^-1.
        step: Requested step, at most a tenth of the interval.
        require_positive: Demand Im H > 0 (Gaussian beams). Real Jacobi
            fields are integrated with this switched off.

    Raises:
        ValueOutOfRange: Invalid step or initial data.
        ConjugatePointOrBlowup: An invariant fails along the trajectory.
    """
    Y = np.array(Y0, dtype=np.complex128)
    Z = np.array(Y1, dtype=np.complex128)
    if Y.shape != (3, 3) or Z.shape != (3, 3):
        raise ValueOutOfRange("riccati.initial", "Y0 and Y1 must be 3x3")
    if not 0 < step <= profile.length / 10.0 * (1 + 1e-12):
        raise ValueOutOfRange(
            "riccati.step", f"need 0 < step <= {profile.length / 10.0}, got {step}"
        )
    if abs(np.linalg.det(Y)) < DET_Y_FLOOR:
        raise ValueOutOfRange("riccati.initial", "Y0 is singular")
    try:
        check_state(profile.tau_min, Y, hessian(Y, Z), require_positive)
    except ConjugatePointOrBlowup as exc:
        raise ValueOutOfRange("riccati.initial", f"initial Hessian invalid: {exc.reason}") from exc

    n_steps = max(1, math.ceil(profile.length / step - 1e-9))
    h = profile.length / n_steps
    taus = profile.tau_min + h * np.arange(n_steps + 1)
    taus[-1] = profile.tau_max

    Ys = np.empty((n_steps + 1, 3, 3), dtype=np.complex128)
    Zs = np.empty_like(Ys)
    Hs = np.empty_like(Ys)
    Ys[0], Zs[0], Hs[0] = Y, Z, hessian(Y, Z)

    for n in range(n_steps):
        Y, Z = _rk4_step(profile, float(taus[n]), h, Y, Z)
        H = hessian(Y, Z)
        check_state(float(taus[n + 1]), Y, H, require_positive)
        Ys[n + 1], Zs[n + 1], Hs[n + 1] = Y, Z, H

    logger.debug("riccati_solved", profile=profile.label, samples=n_steps + 1, step=h)
    return RiccatiTrajectory(taus=taus, Y=Ys, Z=Zs, H=Hs)


def conserved_c0(states: RiccatiTrajectory) -> np.ndarray:
    """det(Im H(tau)) * |det Y(tau)|^2 at every sample."""
    if len(states) == 0:
        raise ValueOutOfRange("trajectory", "empty trajectory")
    imag = 0.5 * (states.H.imag + np.swapaxes(states.H.imag, 1, 2))
    return np.linalg.det(imag) * np.abs(np.linalg.det(states.Y)) ** 2


def c0_drift(states: RiccatiTrajectory) -> float:
    """Largest relative departure of the conserved quantity from its initial value."""
    c0 = conserved_c0(states)
    reference = abs(c0[0])
    if reference == 0.0:
        raise ValueOutOfRange("riccati.initial", "conserved quantity vanishes initially")
    return float(np.max(np.abs(c0 - c0[0])) / reference)


def flat_solution(Y0: np.ndarray, Y1: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Exact Y(tau) = Y0 + (tau - tau0) C Y1 for D = 0."""
    offsets = np.asarray(taus, dtype=np.float64) - float(taus[0])
    step = C_MATRIX @ np.asarray(Y1, dtype=np.complex128)
    return np.asarray(Y0, dtype=np.complex128)[None] + offsets[:, None, None] * step[None]
