"""Numerical laboratory for heat flow in tubular neighborhoods of surfaces.

A surface chart from the catalog defines a tube of half-width R between
its two offset walls; the heat solvers, ball heat contents, and curvature
invariants in the submodules measure whether that configuration can carry
a stationary isothermic flow, and the CLI wires them into reproducible
experiments.
"""

from .config import ConfigError, ExperimentConfig
from .content import (
    BalanceReport,
    HeatContentSeries,
    PowerLawFit,
    balance_law_report,
    ball_heat_content,
    calibrate_content_constant,
    default_fit_times,
    fit_power_law,
    heat_content_series,
    predicted_amplitude,
    reduced_content_series,
)
from .heat import HeatProblemSpec, QuadratureSpec, TemperatureField
from .invariants import (
    InvariantReport,
    Verdict,
    amgm_certificate,
    constancy_report,
    mean_curvature_sign_report,
    phi_diff,
    phi_sum,
    product_identity_check,
    umbilic_scan,
)
from .surfaces import (
    CurvaturePair,
    GeometryError,
    SurfaceChart,
    curvature_bound_check,
    foot_points,
    make_surface,
    offset_curvatures,
    principal_curvatures,
    signed_distance,
    surface_frame,
)

__version__ = "0.1.0"

__all__ = [
    "BalanceReport",
    "ConfigError",
    "CurvaturePair",
    "ExperimentConfig",
    "GeometryError",
    "HeatContentSeries",
    "HeatProblemSpec",
    "InvariantReport",
    "PowerLawFit",
    "QuadratureSpec",
    "SurfaceChart",
    "TemperatureField",
    "Verdict",
    "amgm_certificate",
    "balance_law_report",
    "ball_heat_content",
    "calibrate_content_constant",
    "constancy_report",
    "curvature_bound_check",
    "default_fit_times",
    "fit_power_law",
    "foot_points",
    "heat_content_series",
    "make_surface",
    "mean_curvature_sign_report",
    "offset_curvatures",
    "phi_diff",
    "phi_sum",
    "predicted_amplitude",
    "principal_curvatures",
    "product_identity_check",
    "reduced_content_series",
    "signed_distance",
    "surface_frame",
    "umbilic_scan",
    "__version__",
]
