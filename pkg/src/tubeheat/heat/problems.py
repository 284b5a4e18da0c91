"""Heat problem declarations and kernel-quadrature solutions.

A :class:`HeatProblemSpec` names one of six problems on the tube of
half-width R around a chart:

* ``ibvp_ones``   - tube walls held at (+1, +1), cold start;
* ``ibvp_pm``     - outer wall +1, inner wall -1, cold start;
* ``cauchy_sum``  - whole-space flow started from the indicator of both
                    complementary regions (outer + inner);
* ``cauchy_diff`` - started from outer indicator minus inner indicator;
* ``aux_plus``    - the single-wall comparison field for the outer wall;
* ``aux_minus``   - the same for the inner wall.

The auxiliary fields exist in both families: as whole-space flows started
from one region's indicator (``family="cauchy"``) or as single-wall unit
boundary-value problems (``family="ibvp"``).

Cauchy problems are solved by quadrature of the heat kernel against the
initial data: displacements are drawn from the kernel itself (stratified,
see :mod:`tubeheat.heat.sampling`) and the data is averaged at the
displaced points.  The estimate is unbiased with exact tails, and because
streams are shared across problems at equal time, superposition identities
hold exactly, not just statistically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..surfaces import SurfaceChart, signed_distances
from . import oracles
from .sampling import QuadratureSpec, batch_mean_error, gaussian_offsets

PROBLEM_NAMES = ("ibvp_ones", "cauchy_sum", "ibvp_pm", "cauchy_diff",
                 "aux_plus", "aux_minus")
_CAUCHY = frozenset({"cauchy_sum", "cauchy_diff", "aux_plus", "aux_minus"})
_BOUNDARY = {"ibvp_ones": (1.0, 1.0), "ibvp_pm": (1.0, -1.0),
             "aux_plus": (1.0, None), "aux_minus": (None, 1.0)}


@dataclass(frozen=True)
class HeatProblemSpec:
    """One heat problem on the tube around ``chart`` of half-width ``radius``."""

    problem: str
    chart: SurfaceChart
    radius: float
    family: str = "cauchy"  # only meaningful for aux problems

    def __post_init__(self):
        if self.problem not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.radius <= 0:
            raise ValueError("tube half-width must be positive")
        if self.family not in ("cauchy", "ibvp"):
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def is_cauchy(self) -> bool:
        if self.problem in ("aux_plus", "aux_minus"):
            return self.family == "cauchy"
        return self.problem in ("cauchy_sum", "cauchy_diff")

    @property
    def boundary_values(self):
        """(outer, inner) wall values for boundary-value problems."""
        try:
            return _BOUNDARY[self.problem]
        except KeyError:
            raise ValueError(f"{self.problem} has no boundary values") from None


def cauchy_data(problem, d, radius):
    """Initial data evaluated from signed distances, values in {-1, 0, 1}."""
    outer = d > radius
    inner = d < -radius
    if problem == "cauchy_sum":
        return outer.astype(float) + inner
    if problem == "cauchy_diff":
        return outer.astype(float) - inner
    if problem == "aux_plus":
        return outer.astype(float)
    if problem == "aux_minus":
        return inner.astype(float)
    raise ValueError(f"{problem!r} is not a whole-space problem")


def cauchy_solution(spec: HeatProblemSpec, point, t, qspec=None, frame=None):
    """Kernel-quadrature value of a whole-space problem at one point.

    Parameters
    ----------
    point : (3,) array
    t : positive time
    qspec : QuadratureSpec, default budget if omitted
    frame : optional (3, 3) orthonormal matrix (columns) applied to the
        canonical displacement stream.  Passing the local surface frame at
        each of several points makes their estimates common-random-number
        comparable.

    Returns
    -------
    (value, stderr)
    """
    if not spec.is_cauchy:
        raise ValueError(f"{spec.problem} is not solved by kernel quadrature")
    qspec = qspec or QuadratureSpec()
    if t <= 0:
        raise ValueError("time must be positive")
    p = np.asarray(point, float)
    offsets = gaussian_offsets(qspec, t)
    if frame is not None:
        offsets = offsets @ np.asarray(frame, float).T
    z = p + offsets
    d = signed_distances(z.reshape(-1, 3), spec.chart).reshape(z.shape[:2])
    vals = cauchy_data(spec.problem, d, spec.radius)
    return batch_mean_error(vals)


@dataclass
class TemperatureField:
    """A temperature evaluator with provenance and an error indication.

    ``evaluate(point, t) -> (value, error_estimate)``.  For quadrature
    fields the error is a batch standard error; for closed forms it is
    zero; for finite differences it is a resolution heuristic.
    """

    evaluate: Callable
    provenance: str
    problem: str
    value_range: tuple = (None, None)
    times: Optional[tuple] = None
    meta: dict = field(default_factory=dict)

    def __call__(self, point, t):
        return self.evaluate(point, t)

    def value(self, point, t) -> float:
        return self.evaluate(point, t)[0]


_RANGES = {"cauchy_sum": (0.0, 1.0), "cauchy_diff": (-1.0, 1.0),
           "aux_plus": (0.0, 1.0), "aux_minus": (0.0, 1.0),
           "ibvp_ones": (0.0, 1.0), "ibvp_pm": (-1.0, 1.0)}


def cauchy_field(spec: HeatProblemSpec, qspec=None) -> TemperatureField:
    """Wrap kernel quadrature for ``spec`` as a TemperatureField."""
    qspec = qspec or QuadratureSpec()

    def evaluate(point, t, frame=None):
        return cauchy_solution(spec, point, t, qspec, frame=frame)

    return TemperatureField(evaluate=evaluate, provenance="kernel-quadrature",
                            problem=spec.problem,
                            value_range=_RANGES[spec.problem],
                            meta={"seed": qspec.seed, "samples": qspec.samples})


def oracle_field(spec: HeatProblemSpec) -> TemperatureField:
    """Closed-form field for flat and spherical geometry.

    Supported: any whole-space problem on a plane or sphere chart, and the
    auxiliary single-wall problems in the ibvp family on the same charts.
    Everything else has no closed form here and raises ValueError.
    """
    kind = spec.chart.kind
    R = spec.radius
    if kind == "plane":
        def u_plus(pts, t):
            return oracles.halfspace_oracle(R - pts[..., 2], t, spec.family)

        def u_minus(pts, t):
            return oracles.halfspace_oracle(pts[..., 2] + R, t, spec.family)
    elif kind == "sphere":
        rho = spec.chart.params["rho"]
        if rho - R <= 0:
            raise ValueError("inner wall radius must stay positive")

        if spec.family == "cauchy":
            def u_plus(pts, t):
                r = np.linalg.norm(pts, axis=-1)
                return 1.0 - oracles.ball_radial_oracle(r, rho + R, t)

            def u_minus(pts, t):
                r = np.linalg.norm(pts, axis=-1)
                return oracles.ball_radial_oracle(r, rho - R, t)
        else:
            def u_plus(pts, t):
                r = np.linalg.norm(pts, axis=-1)
                return oracles.ball_wall_oracle(r, rho + R, t)

            def u_minus(pts, t):
                r = np.linalg.norm(pts, axis=-1)
                return oracles.exterior_wall_oracle(r, rho - R, t)
    else:
        raise ValueError(f"no closed-form field for chart kind {kind!r}")

    if spec.problem == "aux_plus":
        fn = u_plus
    elif spec.problem == "aux_minus":
        fn = u_minus
    elif spec.problem == "cauchy_sum" and spec.family == "cauchy":
        fn = lambda pts, t: u_plus(pts, t) + u_minus(pts, t)
    elif spec.problem == "cauchy_diff" and spec.family == "cauchy":
        fn = lambda pts, t: u_plus(pts, t) - u_minus(pts, t)
    else:
        raise ValueError(f"no closed form for {spec.problem} ({spec.family})")

    def evaluate(point, t):
        return float(fn(np.asarray(point, float), t)), 0.0

    fld = TemperatureField(evaluate=evaluate, provenance="closed-form",
                           problem=spec.problem,
                           value_range=_RANGES[spec.problem])
    fld.profile = fn  # vectorized (points, t) -> values, used by reductions
    return fld
