"""Brownian-circuit mean-field theory of the mitigation threshold"""

from .equations import (
    MeanFieldParams,
    MeanFieldState,
    delta_rhs,
    delta_system,
    gpm_rhs,
    gpm_system,
    reduce_to_gpm,
    two_population_mask,
)
from .integrator import Trajectory, integrate
from .stability import (
    FixedPoint,
    fixed_points,
    jacobian,
    linear_stability,
    origin_growth_rate,
    probe_stability,
    stability_threshold,
)

__all__ = [
    "MeanFieldParams",
    "MeanFieldState",
    "delta_rhs",
    "delta_system",
    "gpm_rhs",
    "gpm_system",
    "reduce_to_gpm",
    "two_population_mask",
    "Trajectory",
    "integrate",
    "FixedPoint",
    "fixed_points",
    "jacobian",
    "linear_stability",
    "origin_growth_rate",
    "probe_stability",
    "stability_threshold",
]
