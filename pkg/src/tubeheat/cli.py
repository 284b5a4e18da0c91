"""Command-line laboratory: geometry sweeps, solves, and the verify pipeline.

Every subcommand reads one ExperimentConfig, writes data files (CSV) plus a
JSON report into the output directory, and echoes the resolved config so a
run can be reproduced from its artifacts alone.  Reports carry no
timestamps or absolute paths: identical config and seed means identical
bytes.

Exit codes: 0 all checks passed, 1 an enabled assertion failed,
2 configuration or geometry error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig
from .content import (
    balance_law_report,
    calibrate_content_constant,
    default_fit_times,
    fit_power_law,
    heat_content_series,
)
from .heat.fd import solve_ibvp_3d, solve_ibvp_radial, solve_ibvp_slab
from .heat.problems import HeatProblemSpec, cauchy_field
from .heat.sampling import QuadratureSpec
from .invariants import constancy_report
from .surfaces import (
    GeometryError,
    curvature_bound_check,
    curvature_samples,
    make_surface,
    surface_frame,
)

_SUM_PROBLEMS = ("ibvp_ones", "cauchy_sum")
_DIFF_PROBLEMS = ("ibvp_pm", "cauchy_diff")


def _chart(cfg: ExperimentConfig):
    try:
        return make_surface(cfg.surface, **cfg.params)
    except TypeError as exc:
        raise ConfigError(f"bad surface parameters: {exc}") from exc


def _qspec(cfg: ExperimentConfig) -> QuadratureSpec:
    return QuadratureSpec(samples=cfg.samples, batches=cfg.batches,
                          seed=cfg.seed)


def _centers(cfg, chart):
    """Configured centers, or four fixed parameter-space picks."""
    if cfg.centers is not None:
        return cfg.centers
    (u0, u1), (v0, v1) = cfg.region if cfg.region else chart.rect
    fractions = ((0.5, 0.5), (0.05, 0.3), (0.95, 0.45), (0.25, 0.7))
    return tuple((u0 + fu * (u1 - u0), v0 + fv * (v1 - v0))
                 for fu, fv in fractions)


def _probes(cfg, chart):
    """Configured probe points, or a short ladder across the tube."""
    if cfg.probes is not None:
        return cfg.probes
    (u0, u1), (v0, v1) = cfg.region if cfg.region else chart.rect
    point, normal, _ = surface_frame(chart, (0.5 * (u0 + u1), 0.5 * (v0 + v1)))
    return tuple(tuple(point + s * cfg.radius * normal)
                 for s in (-0.5, 0.0, 0.5))


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt_param(v):
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(f"{x:g}" for x in v) + ")"
    return f"{v:g}"


def _surface_label(cfg):
    inner = ", ".join(f"{k}={_fmt_param(v)}" for k, v in sorted(cfg.params.items()))
    return f"{cfg.surface}({inner})"


def cmd_geometry(cfg: ExperimentConfig, out: Path) -> int:
    chart = _chart(cfg)
    bound = curvature_bound_check(chart, cfg.radius, region=cfg.region)
    s = curvature_samples(chart, cfg.grid_nu, cfg.grid_nv, cfg.region)
    _write_csv(out / "geometry.csv",
               ["u", "v", "x", "y", "z", "k1", "k2", "H", "K"],
               zip(s["u"], s["v"], s["x"], s["y"], s["z"],
                   s["k1"], s["k2"], s["H"], s["K"]))
    report = {"config": cfg.to_dict(), "surface": _surface_label(cfg),
              "bound": {"passed": bound.passed, "sup_rk": bound.sup_rk,
                        "worst_uv": list(bound.worst_uv),
                        "radius": bound.radius}}
    _write_json(out / "geometry.json", report)
    if not bound.passed:
        print(f"geometry: curvature bound fails, sup R|k| = {bound.sup_rk:.6g} "
              f"at uv = {bound.worst_uv}", file=sys.stderr)
        return 2
    print(f"geometry: bound ok, sup R|k| = {bound.sup_rk:.6g}")
    return 0


def _solved_field(cfg, chart, spec):
    """Pick the solver matching the problem family and chart."""
    if spec.is_cauchy:
        return cauchy_field(spec, _qspec(cfg))
    boundary = spec.boundary_values
    times = tuple(sorted(cfg.times))
    if chart.kind == "sphere":
        return solve_ibvp_radial(chart.params["rho"], cfg.radius,
                                 boundary, times)
    if chart.kind == "plane":
        return solve_ibvp_slab(cfg.radius, boundary, times)
    return solve_ibvp_3d(chart, cfg.radius, boundary, times,
                         region=cfg.region)


def cmd_solve(cfg: ExperimentConfig, out: Path) -> int:
    chart = _chart(cfg)
    _require_bound(chart, cfg)
    spec = HeatProblemSpec(cfg.problem, chart, cfg.radius, family=cfg.family)
    fld = _solved_field(cfg, chart, spec)
    rows = []
    for p in _probes(cfg, chart):
        for t in cfg.times:
            value, err = fld.evaluate(np.asarray(p), t)
            rows.append([p[0], p[1], p[2], t, value, err])
    _write_csv(out / "probes.csv",
               ["x", "y", "z", "t", "value", "error_estimate"], rows)
    meta = {k: v for k, v in fld.meta.items()
            if isinstance(v, (int, float, str, bool))}
    _write_json(out / "solve.json",
                {"config": cfg.to_dict(), "provenance": fld.provenance,
                 "problem": fld.problem, "meta": meta})
    print(f"solve: {len(rows)} probe values via {fld.provenance}")
    return 0


def cmd_content(cfg: ExperimentConfig, out: Path) -> int:
    chart = _chart(cfg)
    _require_bound(chart, cfg)
    spec = HeatProblemSpec(cfg.problem, chart, cfg.radius, family=cfg.family)
    if spec.is_cauchy:
        target = spec
    else:
        target = _solved_field(cfg, chart, spec)
    centers = _centers(cfg, chart)
    qspec = _qspec(cfg)
    label = _surface_label(cfg)
    rows, fits = [], {}
    for j, uv in enumerate(centers):
        point, normal, (t1, t2) = surface_frame(chart, uv)
        frame = np.column_stack([t1, t2, normal])
        series = heat_content_series(target, point, cfg.radius, cfg.times,
                                     qspec, frame=frame)
        for t, q, e in zip(series.times, series.values, series.errors):
            rows.append([label, cfg.problem, j, t, q, e])
        try:
            fit = fit_power_law(series)
            fits[str(j)] = {"p": fit.exponent, "A": fit.amplitude,
                            "residual": fit.residual,
                            "window": list(fit.window), "seed": cfg.seed}
        except ValueError as exc:
            fits[str(j)] = {"error": str(exc), "seed": cfg.seed}
    _write_csv(out / "content.csv",
               ["surface", "problem", "center_id", "t", "Q", "Q_err"], rows)
    _write_json(out / "content.json", {"config": cfg.to_dict(), "fits": fits})
    print(f"content: {len(rows)} ball contents across {len(centers)} centers")
    return 0


def cmd_balance(cfg: ExperimentConfig, out: Path) -> int:
    chart = _chart(cfg)
    _require_bound(chart, cfg)
    spec = HeatProblemSpec(cfg.problem, chart, cfg.radius, family=cfg.family)
    target = spec if spec.is_cauchy else _solved_field(cfg, chart, spec)
    centers = _centers(cfg, chart)
    report = balance_law_report(target, chart, centers, cfg.radius,
                                cfg.times, _qspec(cfg), workers=cfg.workers)
    rows = []
    for i, t in enumerate(report.times):
        for j in range(len(centers)):
            rows.append([_surface_label(cfg), cfg.problem, j, t,
                         report.contents[i, j], report.content_errors[i, j]])
    _write_csv(out / "balance.csv",
               ["surface", "problem", "center_id", "t", "Q", "Q_err"], rows)
    _write_json(out / "balance.json",
                {"config": cfg.to_dict(), "centers": [list(c) for c in centers],
                 "rows": report.rows(), "max_rel_spread": report.max_rel_spread})
    flag = "significant" if report.significant.any() else "within noise"
    print(f"balance: max relative spread {report.max_rel_spread:.3e} ({flag})")
    return 0


def cmd_invariants(cfg: ExperimentConfig, out: Path) -> int:
    chart = _chart(cfg)
    _require_bound(chart, cfg)
    reports = {which: constancy_report(chart, cfg.radius, which=which,
                                       region=cfg.region,
                                       nu=cfg.grid_nu, nv=cfg.grid_nv)
               for which in ("sum", "diff")}
    rep = reports["sum"]
    h = 0.5 * (rep.k1 + rep.k2)
    _write_csv(out / "invariants.csv",
               ["u", "v", "k1", "k2", "phi_sum", "phi_diff", "H"],
               zip(rep.u, rep.v, rep.k1, rep.k2,
                   rep.phi_sum, rep.phi_diff, h))
    _write_json(out / "invariants.json",
                {"config": cfg.to_dict(),
                 "sum": reports["sum"].to_dict(),
                 "diff": reports["diff"].to_dict()})
    for which in ("sum", "diff"):
        v = reports[which].verdict
        print(f"invariants[{which}]: tags={','.join(v.tags)} "
              f"c={v.c_estimate:.6g}")
    return 0


def cmd_calibrate(cfg: ExperimentConfig, out: Path) -> int:
    window = default_fit_times(scale=cfg.radius * cfg.radius)
    record = {}
    for family in ("cauchy", "ibvp"):
        c = calibrate_content_constant(cfg.radius, family=family, times=window)
        record[family] = {"constant": c, "radius": cfg.radius,
                          "window": list(window)}
    _write_json(out / "calibration.json",
                {"config": cfg.to_dict(), "constants": record})
    print("calibrate: " + "  ".join(
        f"{fam}: {rec['constant']:.6f}" for fam, rec in record.items()))
    return 0


def _require_bound(chart, cfg):
    bound = curvature_bound_check(chart, cfg.radius, region=cfg.region)
    if not bound.passed:
        raise GeometryError(
            f"curvature bound fails for {cfg.surface} at R={cfg.radius:g}: "
            f"sup R|k| = {bound.sup_rk:.6g}")


def cmd_verify(cfg: ExperimentConfig, out: Path) -> int:
    """Full pipeline with cross-checks between its stages.

    The consistency assertion demands that the balance measurement and
    the matching invariant tell the same story: a constant invariant must
    come with spreads inside noise, a varying one with a spread the
    quadrature can actually resolve.  The trace assertion applies to the
    difference-type problems, where stationarity pins the wall trace near
    zero.
    """
    chart = _chart(cfg)
    bound = curvature_bound_check(chart, cfg.radius, region=cfg.region)
    assertions = []
    if "bound" in cfg.assertions:
        assertions.append({"name": "bound", "passed": bound.passed,
                           "detail": {"sup_rk": bound.sup_rk}})
    if not bound.passed:
        _write_json(out / "verify.json",
                    {"config": cfg.to_dict(), "stage": "geometry",
                     "assertions": assertions, "passed": False})
        print(f"verify: geometry stage failed, sup R|k| = {bound.sup_rk:.6g}",
              file=sys.stderr)
        return 2

    reports = {which: constancy_report(chart, cfg.radius, which=which,
                                       region=cfg.region,
                                       nu=cfg.grid_nu, nv=cfg.grid_nv)
               for which in ("sum", "diff")}

    spec = HeatProblemSpec(cfg.problem, chart, cfg.radius, family=cfg.family)
    target = spec if spec.is_cauchy else _solved_field(cfg, chart, spec)
    balance = balance_law_report(target, chart, _centers(cfg, chart),
                                 cfg.radius, cfg.times, _qspec(cfg),
                                 workers=cfg.workers)

    if cfg.problem in _DIFF_PROBLEMS:
        which = "diff"
    elif cfg.problem in _SUM_PROBLEMS:
        which = "sum"
    else:
        which = None

    if "consistency" in cfg.assertions:
        constant = (reports[which].stats.get(which, {}).get("constant")
                    if which else None)
        if constant is None:
            assertions.append({"name": "consistency", "passed": True,
                               "detail": "no matching invariant to compare"})
        else:
            detected = bool(balance.significant.any())
            assertions.append({
                "name": "consistency",
                "passed": constant != detected,
                "detail": {"invariant": which, "constant": constant,
                           "imbalance_detected": detected}})

    if "trace" in cfg.assertions:
        if which == "diff" and reports["diff"].stats.get(
                "diff", {}).get("constant"):
            tol = cfg.tolerance("trace", 1e-3)
            worst = float(np.abs(balance.traces).max())
            noise = float(3.0 * balance.trace_errors.max())
            assertions.append({"name": "trace",
                               "passed": worst <= max(tol, noise),
                               "detail": {"max_abs_trace": worst,
                                          "tolerance": tol,
                                          "noise": noise}})
        else:
            assertions.append({"name": "trace", "passed": True,
                               "detail": "not a stationary difference case"})

    passed = all(a["passed"] for a in assertions)
    report = {"config": cfg.to_dict(),
              "surface": _surface_label(cfg),
              "assertions": assertions,
              "invariants": {w: reports[w].to_dict() for w in reports},
              "balance": {"rows": balance.rows(),
                          "max_rel_spread": balance.max_rel_spread},
              "passed": passed}
    _write_json(out / "verify.json", report)
    for a in assertions:
        print(f"verify[{a['name']}]: {'pass' if a['passed'] else 'FAIL'}")
    return 0 if passed else 1


_COMMANDS = {
    "geometry": cmd_geometry,
    "solve": cmd_solve,
    "content": cmd_content,
    "balance": cmd_balance,
    "invariants": cmd_invariants,
    "calibrate": cmd_calibrate,
    "verify": cmd_verify,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubeheat",
        description="Numerical laboratory for heat flow in tubular "
                    "neighborhoods of surfaces.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None,
                       help="JSON experiment config (defaults used if omitted)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the quadrature seed")
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (default from config)")
        p.add_argument("--workers", type=int, default=None,
                       help="override the worker count")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = (ExperimentConfig.from_file(args.config)
               if args.config else ExperimentConfig())
        if args.seed is not None:
            cfg.seed = args.seed
        if args.workers is not None:
            cfg.workers = args.workers
        cfg.validate()
        out = Path(args.out) if args.out else Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out)
    except (ConfigError, GeometryError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
