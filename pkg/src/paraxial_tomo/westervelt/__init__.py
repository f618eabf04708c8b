"""One-dimensional Westervelt solvers and the second-order linearization identity."""

from paraxial_tomo.westervelt.config import Westervelt1DConfig, smooth_bump
from paraxial_tomo.westervelt.solver import (
    WaveTrace1D,
    discrete_energy,
    solve_linear,
    solve_nonlinear,
    solve_sourced,
)
from paraxial_tomo.westervelt.identity import (
    ConvergenceRow,
    IdentityResult,
    fitted_order,
    identity_convergence,
    observed_orders,
    polarization_convergence,
    polarization_source,
    relative_difference,
    second_linearization,
    verify_integral_identity,
)

__all__ = [
    "Westervelt1DConfig",
    "smooth_bump",
    "WaveTrace1D",
    "discrete_energy",
    "solve_linear",
    "solve_nonlinear",
    "solve_sourced",
    "ConvergenceRow",
    "IdentityResult",
    "fitted_order",
    "identity_convergence",
    "observed_orders",
    "polarization_convergence",
    "polarization_source",
    "relative_difference",
    "second_linearization",
    "verify_integral_identity",
]
