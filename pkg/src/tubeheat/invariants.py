"""Curvature invariants of the tube walls and the classification verdicts.

Two scalar invariants are built from the principal curvatures and the tube
half-width R,

    phi_sum  = sqrt((1-R k1)(1-R k2)) + sqrt((1+R k1)(1+R k2))
    phi_diff = sqrt((1-R k1)(1-R k2)) - sqrt((1+R k1)(1+R k2))

A surface can only carry a stationary isothermic heat flow of the matching
kind when the invariant is the same number at every point, and the theory
pins down what that number can be: the sum never exceeds 2 (AM-GM), with
equality exactly at umbilic points, and the difference ties to the mean
curvature through phi_diff * phi_sum = -4 R H.  The verdict machinery
reproduces that case analysis on sampled grids.  Verdicts are advisory
labels over samples, never proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .surfaces import (
    CurvaturePair,
    GeometryError,
    curvature_grid,
    curvature_samples,
    offset_curvatures,
)

CONSTANCY_RTOL = 1e-8      # relative std below which a sampled Phi is constant
SUM_EQUALITY_TOL = 1e-6    # |c - 2| for the totally umbilical branch
DIFF_ZERO_TOL = 1e-8       # |c| for the minimal branch
WITNESS_TOL = 1e-3         # closeness demanded of the escaping-sequence limits

VERDICT_TAGS = ("totally_umbilical", "plane_or_sphere", "minimal_c_zero",
                "sign_definite_H", "inconsistent", "inconclusive")


def _products(k1, k2, radius):
    a = (1.0 - radius * k1) * (1.0 - radius * k2)
    b = (1.0 + radius * k1) * (1.0 + radius * k2)
    return a, b


def _require_bound(pair, radius):
    # checking the products alone is not enough: a pair violating the
    # bound in both directions keeps every product positive
    if radius * max(abs(pair.k1), abs(pair.k2)) >= 1.0:
        raise GeometryError("curvature bound violated: R |k| >= 1")


def phi_sum(pair: CurvaturePair, radius) -> float:
    """The sum invariant; requires the curvature bound R|k| < 1."""
    radius = float(radius)
    _require_bound(pair, radius)
    a, b = _products(pair.k1, pair.k2, radius)
    return math.sqrt(a) + math.sqrt(b)


def phi_diff(pair: CurvaturePair, radius) -> float:
    """The difference invariant, with the same domain as :func:`phi_sum`."""
    radius = float(radius)
    _require_bound(pair, radius)
    a, b = _products(pair.k1, pair.k2, radius)
    return math.sqrt(a) - math.sqrt(b)


def phi_sum_via_offsets(pair: CurvaturePair, radius) -> float:
    """The sum invariant written on the offset walls instead.

    Equal to phi_sum identically: each wall contributes
    {prod_j (1 - R k_j^wall)}^(-1/2) evaluated at its own curvatures.
    Kept as a separate code path so the equivalence stays testable.
    """
    radius = float(radius)
    outer, inner = offset_curvatures(pair, radius)
    total = 0.0
    for wall in (outer, inner):
        prod = (1.0 - radius * wall.k1) * (1.0 - radius * wall.k2)
        if prod <= 0.0:
            raise GeometryError("offset wall product not positive")
        total += 1.0 / math.sqrt(prod)
    return total


def amgm_certificate(pair: CurvaturePair, radius) -> float:
    """Slack 2 - phi_sum, nonnegative and zero only at umbilic pairs."""
    return 2.0 - phi_sum(pair, radius)


def product_identity_check(pair: CurvaturePair, radius) -> float:
    """Residual of phi_diff * phi_sum + 4 R H, identically zero."""
    radius = float(radius)
    return phi_diff(pair, radius) * phi_sum(pair, radius) \
        + 4.0 * radius * pair.mean


@dataclass
class UmbilicScan:
    """Grid umbilics plus the escaping-sequence probe.

    ``witness`` reports whether curvatures flatten toward a shared finite
    limit along parameter rings pushed geometrically outward, the sampled
    stand-in for an umbilical sequence escaping to infinity.
    """

    umbilic_uv: list
    inf_gap: float
    inf_gap_uv: tuple
    witness: bool
    trail: list = field(default_factory=list)
    tolerance: float = 1e-6


def _witness_trail(chart, region, rings=10, directions=32):
    (u0, u1), (v0, v1) = region if region is not None else chart.rect
    cu, cv = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
    base = max(u1 - u0, v1 - v0)
    phis = 2.0 * math.pi * (np.arange(directions) + 0.5) / directions
    trail = []
    for k in range(rings):
        r = base * 2.0 ** k
        u = cu + r * np.cos(phis)
        v = cv + r * np.sin(phis)
        k1, k2 = curvature_grid(chart, u, v)
        gaps = k2 - k1
        i = int(np.argmin(gaps))
        trail.append({"radius": r, "gap": float(gaps[i]),
                      "k1": float(k1[i]), "k2": float(k2[i]),
                      "H": float(0.5 * (k1[i] + k2[i]))})
    return trail


def _witness_found(trail):
    if len(trail) < 3:
        return False
    last, prev, first = trail[-1], trail[-2], trail[0]
    numbers = [last["gap"], last["k1"], last["k2"], last["H"], prev["H"]]
    if not all(map(math.isfinite, numbers)):
        return False
    gap_shrank = last["gap"] < 0.1 * max(first["gap"], DIFF_ZERO_TOL)
    limits_meet = abs(last["k1"] - last["k2"]) <= WITNESS_TOL
    limit_settled = abs(last["H"] - prev["H"]) <= WITNESS_TOL
    return gap_shrank and limits_meet and limit_settled


def umbilic_scan(chart, region=None, tolerance=1e-6, nu=96, nv=96) -> UmbilicScan:
    """Find umbilic samples and probe for an escaping umbilical sequence."""
    s = curvature_samples(chart, nu, nv, region)
    gap = s["k2"] - s["k1"]
    i = int(np.argmin(gap))
    hits = np.flatnonzero(gap < tolerance)
    trail = _witness_trail(chart, region)
    return UmbilicScan(
        umbilic_uv=[(float(s["u"][j]), float(s["v"][j])) for j in hits],
        inf_gap=float(gap[i]),
        inf_gap_uv=(float(s["u"][i]), float(s["v"][i])),
        witness=_witness_found(trail),
        trail=trail,
        tolerance=tolerance,
    )


def mean_curvature_sign_report(chart, region=None, nu=96, nv=96):
    """Sampled (inf H, sup H) over the region."""
    s = curvature_samples(chart, nu, nv, region)
    return float(s["H"].min()), float(s["H"].max())


@dataclass
class Verdict:
    tags: tuple
    c_estimate: float
    inf_h: float
    sup_h: float
    inf_abs_h: float
    inf_gap: float
    note: str = ""

    def to_dict(self):
        return {"tags": list(self.tags), "c_estimate": self.c_estimate,
                "inf_h": self.inf_h, "sup_h": self.sup_h,
                "inf_abs_h": self.inf_abs_h, "inf_gap": self.inf_gap,
                "note": self.note}


@dataclass
class InvariantReport:
    surface: str
    radius: float
    which: str
    u: np.ndarray
    v: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    phi_sum: np.ndarray
    phi_diff: np.ndarray
    admissible: np.ndarray
    stats: dict
    verdict: Verdict

    @property
    def n_admissible(self) -> int:
        return int(self.admissible.sum())

    def to_dict(self):
        return {"surface": self.surface, "radius": self.radius,
                "which": self.which, "n_samples": int(self.u.size),
                "n_admissible": self.n_admissible, "stats": self.stats,
                "verdict": self.verdict.to_dict()}


def _invariant_stats(values):
    mean = float(values.mean())
    std = float(values.std())
    dev = float(np.abs(values - mean).max())
    tol = CONSTANCY_RTOL * max(1.0, abs(mean))
    return {"mean": mean, "std": std, "max_deviation": dev,
            "range": float(values.max() - values.min()),
            "constancy_tol": tol, "constant": bool(std <= tol)}


def _sum_verdict(stats, chart, region, supports):
    if not stats["constant"]:
        return Verdict(tags=("inconsistent",), note="sum invariant varies",
                       **supports)
    c = stats["mean"]
    if abs(c - 2.0) <= SUM_EQUALITY_TOL:
        return Verdict(tags=("totally_umbilical", "plane_or_sphere"),
                       note="equality case of the sum bound", **supports)
    scan = umbilic_scan(chart, region)
    if scan.umbilic_uv or scan.witness:
        note = ("constant below 2 yet umbilics present"
                if scan.umbilic_uv else
                "constant below 2 with an escaping umbilical sequence")
        return Verdict(tags=("inconsistent",), note=note, **supports)
    return Verdict(tags=("inconclusive",),
                   note="constant below 2, no umbilic evidence either way",
                   **supports)


def _diff_verdict(stats, supports):
    if not stats["constant"]:
        return Verdict(tags=("inconsistent",), note="difference invariant varies",
                       **supports)
    c = stats["mean"]
    if abs(c) <= DIFF_ZERO_TOL and abs(supports["inf_h"]) <= DIFF_ZERO_TOL \
            and abs(supports["sup_h"]) <= DIFF_ZERO_TOL:
        return Verdict(tags=("minimal_c_zero",),
                       note="zero constant on a minimal surface", **supports)
    if abs(c) > DIFF_ZERO_TOL:
        return Verdict(tags=("sign_definite_H",),
                       note="nonzero constant forces one-signed mean curvature",
                       **supports)
    return Verdict(tags=("inconclusive",),
                   note="zero constant but mean curvature not flat", **supports)


def constancy_report(chart, radius, which="sum", region=None,
                     nu=96, nv=96) -> InvariantReport:
    """Sample both invariants over a region and classify the chosen one.

    Decision rules, applied to the sampled values of ``which``:

    * sum: constant at 2 means totally umbilical, hence a plane or sphere;
      constant below 2 is inconsistent once any umbilic (or an escaping
      umbilical sequence) shows up, and otherwise stays inconclusive.
    * diff: a constant zero together with vanishing mean curvature is the
      minimal-surface case; a nonzero constant pins the sign of H, and
      the sampled inf |H| is recorded as its margin.

    Non-constant samples are inconsistent with stationarity either way,
    and fewer than 100 admissible samples refuses to conclude anything.
    """
    if which not in ("sum", "diff"):
        raise ValueError("which must be 'sum' or 'diff'")
    radius = float(radius)
    s = curvature_samples(chart, nu, nv, region)
    a, b = _products(s["k1"], s["k2"], radius)
    admissible = radius * np.maximum(np.abs(s["k1"]), np.abs(s["k2"])) < 1.0

    sums = np.full(s["k1"].shape, np.nan)
    diffs = np.full(s["k1"].shape, np.nan)
    ra, rb = np.sqrt(a[admissible]), np.sqrt(b[admissible])
    sums[admissible] = ra + rb
    diffs[admissible] = ra - rb

    h = s["H"][admissible]
    gap = (s["k2"] - s["k1"])[admissible]
    label = f"{chart.kind}({', '.join(f'{k}={v:g}' for k, v in chart.params.items())})"

    if int(admissible.sum()) < 100:
        stats = {}
        supports = {"c_estimate": math.nan, "inf_h": math.nan,
                    "sup_h": math.nan, "inf_abs_h": math.nan,
                    "inf_gap": math.nan}
        verdict = Verdict(tags=("inconclusive",),
                          note="fewer than 100 admissible samples", **supports)
    else:
        stats = {"sum": _invariant_stats(sums[admissible]),
                 "diff": _invariant_stats(diffs[admissible])}
        chosen = stats[which]
        supports = {"c_estimate": chosen["mean"],
                    "inf_h": float(h.min()), "sup_h": float(h.max()),
                    "inf_abs_h": float(np.abs(h).min()),
                    "inf_gap": float(gap.min())}
        if which == "sum":
            verdict = _sum_verdict(chosen, chart, region, supports)
        else:
            verdict = _diff_verdict(chosen, supports)

    return InvariantReport(surface=label, radius=radius, which=which,
                           u=s["u"], v=s["v"], k1=s["k1"], k2=s["k2"],
                           phi_sum=sums, phi_diff=diffs,
                           admissible=admissible, stats=stats,
                           verdict=verdict)
