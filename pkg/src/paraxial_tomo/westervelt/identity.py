"""Second-order polarization of the boundary response and the integral identity.

Differentiating the Westervelt solution twice in the amplitudes of two
incident pulses gives a field U that solves the linear wave equation with
source 2 beta d_t^2(u1 u2). Pairing U with a backward wave u0 driven by the
receiver pulse f0 yields

    sum over ends of  int dU/dnu f0 dt  =  2 int int beta d_t(u1 u2) d_t u0 dx dt,

which is checked here on a sequence of grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from paraxial_tomo.errors import DegenerateIdentity
from paraxial_tomo.utils.logging import get_logger
from paraxial_tomo.utils.parallel import map_ordered
from paraxial_tomo.westervelt.config import Westervelt1DConfig
from paraxial_tomo.westervelt.solver import (
    WaveTrace1D,
    solve_linear,
    solve_nonlinear,
    solve_sourced,
)

logger = get_logger("westervelt.identity")

DEGENERATE_LEVEL = 1e-14


class IdentityResult(NamedTuple):
    lhs: float
    rhs: float
    relative_gap: float


@dataclass(frozen=True)
class ConvergenceRow:
    parameter: float
    value: float
    order: float | None


def polarization_source(config: Westervelt1DConfig, u1: WaveTrace1D, u2: WaveTrace1D) -> np.ndarray:
    """Discrete source of the mixed second derivative of the nonlinear scheme.

    S[n] = 2 beta (u1 dtt u2 + u2 dtt u1 + 2 D-u1 D-u2) at level n, which is
    exactly what the epsilon1 * epsilon2 terms of the leapfrog update produce.
    """
    dt = config.time_step
    beta = config.beta()
    a, b = u1.p, u2.p
    source = np.zeros_like(a)
    dtt_a = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / dt**2
    dtt_b = (b[2:] - 2.0 * b[1:-1] + b[:-2]) / dt**2
    back_a = (a[1:-1] - a[:-2]) / dt
    back_b = (b[1:-1] - b[:-2]) / dt
    source[1:-1] = 2.0 * beta * (
        a[1:-1] * dtt_b + b[1:-1] * dtt_a + 2.0 * back_a * back_b
    )
    return source


def second_linearization(
    config: Westervelt1DConfig, workers: int = 1
) -> tuple[WaveTrace1D, WaveTrace1D]:
    """Finite-difference and direct forms of the mixed amplitude derivative.

    Returns:
        (U_fd, U_direct): U_fd from the four nonlinear solves of the
        polarization stencil, U_direct from one sourced linear solve.
    """
    e1, e2 = config.eps1, config.eps2
    f = config.incident_pulse

    def boundary(a1: float, a2: float):
        return lambda t: a1 * f(t) + a2 * f(t)

    amplitudes = [(e1, e2), (e1, 0.0), (0.0, e2), (0.0, 0.0)]
    p11, p10, p01, p00 = map_ordered(
        lambda pair: solve_nonlinear(config, boundary(*pair), 1.0), amplitudes, workers
    )
    u_fd = WaveTrace1D(
        config.t(), config.x(), (p11.p - p10.p - p01.p + p00.p) / (e1 * e2)
    )

    u1 = solve_linear(config, f, "forward", "left")
    u2 = u1
    u_direct = solve_sourced(config, polarization_source(config, u1, u2))
    return u_fd, u_direct


def relative_difference(a: WaveTrace1D, b: WaveTrace1D) -> float:
    norm_b = float(np.linalg.norm(b.p))
    if norm_b == 0.0:
        return float(np.linalg.norm(a.p))
    return float(np.linalg.norm(a.p - b.p) / norm_b)


def verify_integral_identity(config: Westervelt1DConfig) -> IdentityResult:
    """Compare the boundary pairing with the interior beta integral.

    Raises:
        DegenerateIdentity: If both sides vanish although beta does not.
    """
    t = config.t()
    x = config.x()
    dt = config.time_step
    beta = config.beta()

    u1 = solve_linear(config, config.incident_pulse, "forward", "left")
    u_direct = solve_sourced(config, polarization_source(config, u1, u1))
    u0 = solve_linear(config, config.receiver_pulse, "backward", "right")

    boundary = u_direct.neumann_left * u0.p[:, 0] + u_direct.neumann_right * u0.p[:, -1]
    lhs = float(integrate.trapezoid(boundary, x=t))

    product_rate = np.gradient(u1.p * u1.p, dt, axis=0)
    receiver_rate = np.gradient(u0.p, dt, axis=0)
    integrand = beta[None, :] * product_rate * receiver_rate
    rhs = 2.0 * float(integrate.trapezoid(integrate.trapezoid(integrand, x=x, axis=1), x=t))

    scale = max(abs(lhs), abs(rhs))
    if scale < DEGENERATE_LEVEL:
        if np.any(beta):
            raise DegenerateIdentity(
                f"both sides below {DEGENERATE_LEVEL:g}; the pulses do not interact in beta"
            )
        return IdentityResult(lhs, rhs, 0.0)

    gap = abs(lhs - rhs) / scale
    logger.info("identity_checked", n_x=config.n_x, lhs=lhs, rhs=rhs, gap=gap)
    return IdentityResult(lhs, rhs, gap)


def observed_orders(parameters: Sequence[float], values: Sequence[float]) -> list[float | None]:
    """Slopes of log(value) against log(parameter) between consecutive entries."""
    orders: list[float | None] = [None]
    for (p0, v0), (p1, v1) in zip(zip(parameters, values), zip(parameters[1:], values[1:])):
        if v0 > 0 and v1 > 0 and p0 != p1:
            orders.append(math.log(v0 / v1) / math.log(p0 / p1))
        else:
            orders.append(None)
    return orders


def identity_convergence(
    config: Westervelt1DConfig, n_values: Sequence[int] = (200, 400, 800)
) -> list[ConvergenceRow]:
    """Relative identity gap on a sequence of grids; orders are measured in 1 / n_x."""
    gaps = [verify_integral_identity(config.refined(n)).relative_gap for n in n_values]
    orders = observed_orders([1.0 / n for n in n_values], gaps)
    return [ConvergenceRow(float(n), g, o) for n, g, o in zip(n_values, gaps, orders)]


def polarization_convergence(
    config: Westervelt1DConfig,
    eps_values: Sequence[float] = (1e-3, 5e-4, 2.5e-4),
    workers: int = 1,
) -> list[ConvergenceRow]:
    """Relative difference between U_fd and U_direct as the amplitudes shrink."""
    errors = []
    for eps in eps_values:
        u_fd, u_direct = second_linearization(config.with_eps(eps), workers)
        errors.append(relative_difference(u_fd, u_direct))
    orders = observed_orders(list(eps_values), errors)
    return [ConvergenceRow(e, err, o) for e, err, o in zip(eps_values, errors, orders)]


def fitted_order(parameters: Sequence[float], values: Sequence[float]) -> float | None:
    """Least-squares slope of log(value) against log(parameter); None if a value vanishes."""
    p = np.asarray(parameters, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if p.size < 2 or np.any(v <= 0) or np.any(p <= 0):
        return None
    return float(np.polyfit(np.log(p), np.log(v), 1)[0])
