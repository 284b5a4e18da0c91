"""Heat flow solvers and reference solutions on tubes."""

from .checks import ComparisonReport, VaradhanReport, comparison_bounds_check, varadhan_check
from .fd import solve_ibvp_3d, solve_ibvp_radial, solve_ibvp_slab
from .oracles import (
    ball_radial_oracle,
    ball_wall_oracle,
    exterior_wall_oracle,
    halfspace_oracle,
)
from .problems import (
    PROBLEM_NAMES,
    HeatProblemSpec,
    TemperatureField,
    cauchy_data,
    cauchy_field,
    cauchy_solution,
    oracle_field,
)
from .sampling import QuadratureSpec, ball_offsets, batch_mean_error, gaussian_offsets, stream
from .special import erf, erfc

__all__ = [
    "ComparisonReport",
    "HeatProblemSpec",
    "PROBLEM_NAMES",
    "QuadratureSpec",
    "TemperatureField",
    "VaradhanReport",
    "ball_radial_oracle",
    "ball_offsets",
    "ball_wall_oracle",
    "batch_mean_error",
    "cauchy_data",
    "cauchy_field",
    "cauchy_solution",
    "comparison_bounds_check",
    "erf",
    "erfc",
    "exterior_wall_oracle",
    "gaussian_offsets",
    "halfspace_oracle",
    "oracle_field",
    "solve_ibvp_3d",
    "solve_ibvp_radial",
    "solve_ibvp_slab",
    "stream",
    "varadhan_check",
]
