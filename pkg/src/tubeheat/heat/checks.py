"""Consistency checks between solved fields and their comparison bounds.

Two families of bounds tie the main problems to the single-wall fields
u_plus and u_minus:

* sum-type (both walls at +1, or data outer + inner):
      max(u_plus, u_minus) <= u <= u_plus + u_minus
* difference-type (walls at +1/-1, or data outer - inner):
      max(-u_minus, u_plus - 2 u_minus) <= u <= min(u_plus, 2 u_plus - u_minus)

Violations are measured on the scale of the wall data (so 0.02 means two
percent of a unit wall value), which is the scale the maximum principle
controls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_SUM_PROBLEMS = {"ibvp_ones", "cauchy_sum"}
_DIFF_PROBLEMS = {"ibvp_pm", "cauchy_diff"}


@dataclass
class ComparisonReport:
    kind: str
    max_violation: float
    rows: list = field(default_factory=list)

    def within(self, tol) -> bool:
        return self.max_violation <= tol


def comparison_bounds_check(main_field, plus_field, minus_field,
                            points, times) -> ComparisonReport:
    """Evaluate the sandwich bounds for ``main_field`` at probes and times."""
    problem = main_field.problem
    if problem in _SUM_PROBLEMS:
        kind = "sum"
    elif problem in _DIFF_PROBLEMS:
        kind = "diff"
    else:
        raise ValueError(f"no comparison bounds for problem {problem!r}")

    rows, worst = [], 0.0
    for t in times:
        for p in np.atleast_2d(np.asarray(points, float)):
            u, _ = main_field.evaluate(p, t)
            up, _ = plus_field.evaluate(p, t)
            um, _ = minus_field.evaluate(p, t)
            if kind == "sum":
                lower, upper = max(up, um), up + um
            else:
                lower = max(-um, up - 2.0 * um)
                upper = min(up, 2.0 * up - um)
            violation = max(lower - u, u - upper, 0.0)
            worst = max(worst, violation)
            rows.append({"point": tuple(p), "t": float(t), "u": u,
                         "u_plus": up, "u_minus": um,
                         "lower": lower, "upper": upper,
                         "violation": violation})
    return ComparisonReport(kind=kind, max_violation=worst, rows=rows)


@dataclass
class VaradhanReport:
    rows: list
    min_usable_t: float

    @property
    def worst_ratio_error(self) -> float:
        usable = [abs(r["ratio"] - 1.0) for r in self.rows if r["usable"]]
        return max(usable) if usable else math.inf


def varadhan_check(field, entries, times) -> VaradhanReport:
    """Tabulate -4t log u against squared wall distance as t decreases.

    ``entries`` is a list of (point, wall_distance) pairs.  Rows flag
    evaluations where u has underflowed (or a quadrature estimate came out
    nonpositive), and ``min_usable_t`` records how far the sweep got before
    that happened.
    """
    rows = []
    min_usable = math.inf
    for point, dist in entries:
        dist2 = float(dist) ** 2
        for t in times:
            u, _ = field.evaluate(np.asarray(point, float), t)
            usable = u > 0.0 and math.isfinite(u)
            value = -4.0 * t * math.log(u) if usable else math.nan
            if usable:
                min_usable = min(min_usable, t)
            rows.append({"point": tuple(np.asarray(point, float)),
                         "t": float(t), "u": u, "dist_sq": dist2,
                         "minus_4t_log_u": value,
                         "ratio": value / dist2 if usable else math.nan,
                         "usable": usable})
    return VaradhanReport(rows=rows, min_usable_t=min_usable)
