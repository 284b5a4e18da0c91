"""Acceptance gate: the thirteen headline checks, one per test.

Each test prints a single PASS/FAIL line (run with -s or read captured
output) before asserting, so a red run still reports every criterion's
measured numbers.  Budgets are sized to finish in about a minute total.
"""

import math

import numpy as np

from conftest import admissible_pair_arrays
from tubeheat.cli import main as cli_main
from tubeheat.config import ExperimentConfig
from tubeheat.content import (
    amplitude_at_exponent,
    balance_law_report,
    calibrate_content_constant,
    default_fit_times,
    fit_power_law,
    reduced_content_series,
)
from tubeheat.heat import (
    HeatProblemSpec,
    QuadratureSpec,
    ball_wall_oracle,
    cauchy_field,
    cauchy_solution,
    comparison_bounds_check,
    exterior_wall_oracle,
    halfspace_oracle,
    solve_ibvp_3d,
    solve_ibvp_radial,
)
from tubeheat.invariants import (
    constancy_report,
    phi_sum,
    phi_sum_via_offsets,
    product_identity_check,
)
from tubeheat.surfaces import (
    CurvaturePair,
    make_surface,
    offset_curvatures,
    principal_curvatures,
    surface_frame,
)


def report(capsys, num, label, ok, detail):
    # write through the capture so the per-criterion line always shows
    with capsys.disabled():
        print(f"criterion {num:02d} {label}: "
              f"{'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} {label}: {detail}"


def seeded_pairs(n):
    k1, k2, radius = admissible_pair_arrays(n)
    return [(CurvaturePair(a, b), r) for a, b, r in zip(k1, k2, radius)]


def test_criterion_01_offset_identity(capsys):
    worst_alg = 0.0
    for pair, R in seeded_pairs(10_000):
        outer, inner = offset_curvatures(pair, R)
        for k in (pair.k1, pair.k2):
            down, up = 1.0 - R * k, 1.0 + R * k
            err_o = min(abs(1.0 - R * outer.k1 - 1.0 / down),
                        abs(1.0 - R * outer.k2 - 1.0 / down))
            err_i = min(abs(1.0 - R * inner.k1 - 1.0 / up),
                        abs(1.0 - R * inner.k2 - 1.0 / up))
            worst_alg = max(worst_alg, err_o / max(1.0, 1.0 / down),
                            err_i / max(1.0, 1.0 / up))

    worst_chart = 0.0
    rho, R = 2.0, 0.75
    for kind, uv in (("sphere", (1.0, 1.0)), ("cylinder", (0.0, 0.5))):
        pair = principal_curvatures(make_surface(kind, rho=rho), uv)
        outer, inner = offset_curvatures(pair, R)
        out_chart = principal_curvatures(make_surface(kind, rho=rho + R), uv)
        in_chart = principal_curvatures(make_surface(kind, rho=rho - R), uv)
        # the walls face into the tube, so the outer chart flips sign
        for got, want in ((sorted((outer.k1, outer.k2)),
                           sorted((-out_chart.k1, -out_chart.k2))),
                          (sorted((inner.k1, inner.k2)),
                           sorted((in_chart.k1, in_chart.k2)))):
            worst_chart = max(worst_chart, abs(got[0] - want[0]),
                              abs(got[1] - want[1]))
    flat_o, flat_i = offset_curvatures(CurvaturePair(0.0, 0.0), R)
    worst_chart = max(worst_chart, abs(flat_o.k1), abs(flat_o.k2),
                      abs(flat_i.k1), abs(flat_i.k2))

    ok = worst_alg < 1e-12 and worst_chart < 1e-8
    report(capsys, 1, "offset-identity", ok,
           f"algebraic {worst_alg:.2e} on 10^4 pairs, charts {worst_chart:.2e}")


def test_criterion_02_sum_bound_equality(capsys):
    pairs = seeded_pairs(10_000)
    rng = np.random.default_rng(4)
    for _ in range(300):
        R = rng.uniform(0.05, 2.0)
        k = rng.uniform(-0.9, 0.9) / R
        pairs.append((CurvaturePair(k, k), R))

    worst_phi = -math.inf
    iff_holds = True
    for pair, R in pairs:
        val = phi_sum(pair, R)
        worst_phi = max(worst_phi, val)
        equality = abs(val - 2.0) <= 1e-12
        umbilical = pair.gap < 1e-10
        iff_holds = iff_holds and (equality == umbilical)

    ok = worst_phi <= 2.0 + 1e-12 and iff_holds
    report(capsys, 2, "sum-bound", ok,
           f"max phi_sum {worst_phi:.15f}, equality iff umbilical: {iff_holds}")


def test_criterion_03_product_identity(capsys):
    worst = max(abs(product_identity_check(pair, R))
                for pair, R in seeded_pairs(10_000))
    report(capsys, 3, "product-identity", worst < 1e-12,
           f"worst residual {worst:.2e}")


def test_criterion_04_two_wall_form(capsys):
    worst = max(abs(phi_sum(pair, R) - phi_sum_via_offsets(pair, R))
                for pair, R in seeded_pairs(1_000))
    report(capsys, 4, "two-wall-form", worst < 1e-12, f"worst gap {worst:.2e}")


def test_criterion_05_short_time_distance(capsys):
    u = halfspace_oracle(1.0, 1e-3, family="ibvp")
    ratio = -4.0 * 1e-3 * math.log(u)
    ok = abs(ratio - 1.0) <= 0.05
    report(capsys, 5, "short-time-distance", ok,
           f"-4t log u = {ratio:.4f} at d=1, t=1e-3")


def test_criterion_06_content_exponent(capsys):
    times = default_fit_times()  # inside [1e-4, 1e-2]
    fits = {}
    for kind, params in (("plane", {}), ("sphere", {"rho": 2.0})):
        spec = HeatProblemSpec("aux_plus", make_surface(kind, **params), 1.0)
        fits[kind] = fit_power_law(reduced_content_series(spec, 1.0, times))
    ok = all(abs(f.exponent - 1.0) <= 0.05 for f in fits.values())
    report(capsys, 6, "content-exponent", ok,
           f"plane p={fits['plane'].exponent:.5f}, "
           f"sphere p={fits['sphere'].exponent:.5f}")


def test_criterion_07_amplitude_ratio(capsys):
    times = default_fit_times()
    amps = {}
    for kind, params in (("plane", {}), ("sphere", {"rho": 2.0})):
        spec = HeatProblemSpec("aux_plus", make_surface(kind, **params), 1.0)
        series = reduced_content_series(spec, 1.0, times)
        amps[kind], _ = amplitude_at_exponent(series, 1.0)
    ratio = amps["sphere"] / amps["plane"]
    # outer wall of the rho=2 sphere carries k = 1/3 twice:
    # (1 - 1/3)^-1 = 3/2 exactly
    ok = abs(ratio / 1.5 - 1.0) <= 0.03
    report(capsys, 7, "amplitude-ratio", ok,
           f"sphere/plane = {ratio:.5f}, target 1.5")


def test_criterion_08_calibration_consistency(capsys):
    c_full = calibrate_content_constant(radius=1.0)
    c_half = calibrate_content_constant(radius=0.5)
    c_ibvp = calibrate_content_constant(radius=1.0, family="ibvp")
    rel = abs(c_full - c_half) / c_full
    ok = c_full > 0 and rel <= 0.02
    report(capsys, 8, "calibration", ok,
           f"c(3) cauchy={c_full:.6f} (R-drift {rel:.2e}), ibvp={c_ibvp:.6f}")


def test_criterion_09_balance_detection(capsys):
    times = (1e-2, 2.5e-3)
    q = QuadratureSpec(samples=2**16, batches=16, seed=31)
    quiet = {}
    for kind, params, R, centers in (
            ("sphere", {"rho": 2.0}, 1.0, [(0.7, 0.7), (1.6, 2.5), (2.3, 4.9)]),
            ("plane", {}, 1.0, [(0.0, 0.0), (1.5, -2.0), (-3.0, 1.0)])):
        chart = make_surface(kind, **params)
        spec = HeatProblemSpec("cauchy_sum", chart, R)
        rep = balance_law_report(spec, chart, centers, R, times, qspec=q)
        quiet[kind] = float(rep.spreads.max())
        assert not rep.significant.any()

    torus = make_surface("torus", a=1.0, b=3.0)
    spec = HeatProblemSpec("cauchy_sum", torus, 0.4)
    rep = balance_law_report(spec, torus, [(0.0, 0.0), (math.pi, 0.0)],
                             0.4, (1e-2,),
                             qspec=QuadratureSpec(samples=2**19, batches=16,
                                                  seed=31))
    margin = float(rep.spreads[0] / rep.noise_scales[0])
    ok = quiet["sphere"] == 0.0 and quiet["plane"] == 0.0 \
        and bool(rep.significant[0])
    report(capsys, 9, "balance-detection", ok,
           f"sphere/plane spreads {quiet['sphere']:.1e}/{quiet['plane']:.1e}, "
           f"torus spread at {margin:.1f}x the 3-sigma scale")


def test_criterion_10_stationary_traces(capsys):
    q = QuadratureSpec(samples=2**20, batches=16, seed=41)
    plane = make_surface("plane")
    spec = HeatProblemSpec("cauchy_diff", plane, 1.0)
    flat, flat_err = cauchy_solution(spec, np.zeros(3), 0.05, q)

    helicoid = make_surface("helicoid", pitch=1.0)
    spec = HeatProblemSpec("cauchy_diff", helicoid, 0.5)
    worst_heli = 0.0
    for uv in ((0.0, 0.0), (1.2, 2.0)):
        p, _, _ = surface_frame(helicoid, uv)
        val, err = cauchy_solution(spec, p, 0.05, q)
        worst_heli = max(worst_heli, abs(val))
    ok = abs(flat) < 1e-3 and worst_heli < 1e-3
    report(capsys, 10, "stationary-traces", ok,
           f"plane |u|={abs(flat):.1e}, helicoid worst |u|={worst_heli:.1e}")


def test_criterion_11_sandwich_bounds(capsys):
    # whole-space family: shared streams make the violation identically zero
    sphere = make_surface("sphere", rho=2.0)
    q = QuadratureSpec(samples=2**14, batches=16, seed=51)
    pts = [np.array([2.2, 0.0, 0.0]), np.array([0.0, -1.6, 0.4])]
    cauchy_worst = 0.0
    for problem in ("cauchy_sum", "cauchy_diff"):
        rep = comparison_bounds_check(
            cauchy_field(HeatProblemSpec(problem, sphere, 1.0), q),
            cauchy_field(HeatProblemSpec("aux_plus", sphere, 1.0), q),
            cauchy_field(HeatProblemSpec("aux_minus", sphere, 1.0), q),
            pts, (0.02, 0.1))
        cauchy_worst = max(cauchy_worst, rep.max_violation)

    # wall family: 1-D and 3-D solvers against the closed-form wall fields
    from tubeheat.heat.problems import TemperatureField

    def closed(fn, problem):
        def evaluate(point, t):
            return float(fn(np.linalg.norm(point), t)), 0.0
        return TemperatureField(evaluate=evaluate, provenance="closed-form",
                                problem=problem)

    plus = closed(lambda r, t: ball_wall_oracle(r, 3.0, t), "aux_plus")
    minus = closed(lambda r, t: exterior_wall_oracle(r, 1.0, t), "aux_minus")
    times = (0.05, 0.2)
    probes = [np.array([r, 0.0, 0.0]) for r in (1.3, 2.0, 2.8)]
    ibvp_worst = 0.0
    for walls in ((1.0, 1.0), (1.0, -1.0)):
        fld = solve_ibvp_radial(2.0, 1.0, walls, times)
        rep = comparison_bounds_check(fld, plus, minus, probes, times)
        ibvp_worst = max(ibvp_worst, rep.max_violation)
    fld3 = solve_ibvp_3d(sphere, 1.0, (1.0, 1.0), (0.1,), h=1.0 / 6.0)
    rep3 = comparison_bounds_check(fld3, plus, minus, probes, (0.1,))
    ibvp_worst = max(ibvp_worst, rep3.max_violation)

    ok = cauchy_worst == 0.0 and ibvp_worst <= 0.02
    report(capsys, 11, "sandwich-bounds", ok,
           f"cauchy violation {cauchy_worst:.1e}, "
           f"ibvp violation {ibvp_worst:.1e} of wall scale")


def test_criterion_12_catalog_verdicts(capsys):
    outcomes = []

    rep = constancy_report(make_surface("sphere", rho=2.0), 1.0, which="sum")
    outcomes.append(rep.verdict.tags == ("totally_umbilical", "plane_or_sphere")
                    and abs(rep.verdict.c_estimate - 2.0) < 1e-6)

    rep = constancy_report(make_surface("plane"), 1.0, which="sum")
    outcomes.append(rep.verdict.tags == ("totally_umbilical", "plane_or_sphere")
                    and abs(rep.verdict.c_estimate - 2.0) < 1e-12)
    rep = constancy_report(make_surface("plane"), 1.0, which="diff")
    outcomes.append(rep.verdict.tags == ("minimal_c_zero",))

    rep = constancy_report(make_surface("cylinder", rho=2.0), 1.0, which="sum")
    outcomes.append(rep.verdict.tags == ("inconclusive",)
                    and abs(rep.verdict.c_estimate - 1.9318516525781364) < 1e-5)

    helicoid = make_surface("helicoid", pitch=1.0)
    region = ((0.0, 2.0), helicoid.rect[1])
    rep = constancy_report(helicoid, 0.5, which="diff", region=region)
    outcomes.append(rep.verdict.tags == ("minimal_c_zero",))
    rep = constancy_report(helicoid, 0.5, which="sum", region=region)
    heli_range = rep.stats["sum"]["range"]
    outcomes.append(rep.verdict.tags == ("inconsistent",) and heli_range >= 0.2)

    loud = True
    for chart, R in ((make_surface("torus", a=1.0, b=3.0), 0.4),
                     (make_surface("graph", amplitude=0.1, waves=(1.0, 1.0)),
                      0.5)):
        for which in ("sum", "diff"):
            rep = constancy_report(chart, R, which=which)
            stats = rep.stats[which]
            loud = loud and rep.verdict.tags == ("inconsistent",) \
                and stats["max_deviation"] > 10.0 * stats["constancy_tol"]
    outcomes.append(loud)

    ok = all(outcomes)
    report(capsys, 12, "catalog-verdicts", ok,
           f"{sum(outcomes)}/{len(outcomes)} surface classifications correct, "
           f"helicoid sum range {heli_range:.3f}")


def test_criterion_13_deterministic_reports(tmp_path, capsys):
    cfg = ExperimentConfig(surface="sphere", params={"rho": 2.0}, radius=1.0,
                           times=(0.01, 0.0025), samples=4096, batches=8,
                           grid_nu=16, grid_nv=16, seed=7)
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(cfg.to_json())
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code = cli_main(["verify", "--config", str(cfg_path),
                         "--out", str(out)])
        assert code == 0
        outs.append((out / "verify.json").read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    report(capsys, 13, "deterministic-reports", ok,
           f"verify.json identical across runs ({len(outs[0])} bytes)")
