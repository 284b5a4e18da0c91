"""Surface catalog, curvature, offsets, and signed distance.

Covers the hand-checkable curvature values for every catalog surface, the
offset curvature identity in both algebraic and chart form, foot-point
geometry, the admissibility bound, and signed-distance round trips.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import admissible_pairs
from tubeheat.surfaces import (
    CurvaturePair,
    GeometryError,
    classify_point,
    curvature_bound_check,
    curvature_grid,
    curvature_samples,
    foot_points,
    make_surface,
    offset_curvatures,
    principal_curvatures,
    project_to_surface,
    signed_distance,
    signed_distances,
    surface_frame,
)


# --- catalog hand values ---------------------------------------------------


def test_sphere_curvatures(sphere_chart):
    pair = principal_curvatures(sphere_chart, (0.9, 2.1))
    assert pair.k1 == pytest.approx(-0.5, abs=1e-12)
    assert pair.k2 == pytest.approx(-0.5, abs=1e-12)
    assert pair.gauss == pytest.approx(0.25, abs=1e-12)


def test_plane_curvatures(plane_chart):
    pair = principal_curvatures(plane_chart, (1.3, -2.0))
    assert abs(pair.k1) < 1e-14 and abs(pair.k2) < 1e-14


def test_cylinder_curvatures(cylinder_chart):
    pair = principal_curvatures(cylinder_chart, (0.4, 1.0))
    assert pair.k1 == pytest.approx(-0.5, abs=1e-12)
    assert abs(pair.k2) < 1e-12


def test_torus_curvatures(torus_chart):
    # tube angle u = 0 is the outer equator: k = -1/a and -cos(u)/(b + a cos(u))
    outer = principal_curvatures(torus_chart, (0.0, 1.0))
    assert outer.k1 == pytest.approx(-1.0, abs=1e-10)
    assert outer.k2 == pytest.approx(-0.25, abs=1e-10)
    inner = principal_curvatures(torus_chart, (math.pi, 1.0))
    assert inner.k1 == pytest.approx(-1.0, abs=1e-10)
    assert inner.k2 == pytest.approx(0.5, abs=1e-10)


def test_helicoid_is_minimal(helicoid_chart):
    for uv in [(0.0, 0.0), (1.5, 2.0), (-2.0, -1.0), (4.0, 5.5)]:
        pair = principal_curvatures(helicoid_chart, uv)
        assert pair.mean == pytest.approx(0.0, abs=1e-10)
        assert pair.gauss < 0.0
    # on the axis K = -1/b^2
    axis = principal_curvatures(helicoid_chart, (0.0, 1.0))
    assert axis.gauss == pytest.approx(-1.0, abs=1e-8)


def test_graph_mean_curvature_straddles_zero():
    chart = make_surface("graph", amplitude=0.1, waves=(1.0, 1.0))
    sample = curvature_samples(chart, nu=48, nv=48)
    assert sample["H"].min() < -1e-3
    assert sample["H"].max() > 1e-3


def test_curvature_pair_ordering_enforced():
    with pytest.raises(ValueError):
        CurvaturePair(1.0, -1.0)
    pair = CurvaturePair.of(1.0, -1.0)
    assert (pair.k1, pair.k2) == (-1.0, 1.0)
    assert pair.gap == 2.0


def test_make_surface_rejects_unknown_kind():
    with pytest.raises(GeometryError):
        make_surface("klein-bottle")


def test_cylinder_requires_rho():
    with pytest.raises(TypeError):
        make_surface("cylinder")


def test_graph_waves_must_be_pair():
    with pytest.raises(TypeError):
        make_surface("graph", amplitude=0.05, waves=2.0)


# --- frames and normals ----------------------------------------------------


def test_sphere_normal_points_outward(sphere_chart):
    p, n, (t1, t2) = surface_frame(sphere_chart, (1.1, 0.7))
    assert np.linalg.norm(p) == pytest.approx(2.0, abs=1e-12)
    # away from the enclosed body means radially outward here
    assert float(p @ n) == pytest.approx(2.0, abs=1e-10)
    assert abs(t1 @ n) < 1e-12 and abs(t2 @ n) < 1e-12
    assert abs(t1 @ t2) < 1e-12
    assert np.linalg.norm(t1) == pytest.approx(1.0, abs=1e-12)


def test_torus_normal_unit_and_orthogonal(torus_chart):
    _, n, (t1, t2) = surface_frame(torus_chart, (2.0, 0.3))
    frame = np.column_stack([t1, t2, n])
    assert np.allclose(frame.T @ frame, np.eye(3), atol=1e-12)


# --- offsets ---------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(admissible_pairs())
def test_offset_identity(pair_r):
    pair, R = pair_r
    outer, inner = offset_curvatures(pair, R)
    for k, ko, ki in [(pair.k1, outer, inner), (pair.k2, outer, inner)]:
        down, up = 1.0 - R * k, 1.0 + R * k
        assert min(abs(1.0 - R * ko.k1 - 1.0 / down),
                   abs(1.0 - R * ko.k2 - 1.0 / down)) < 1e-12 * max(1.0, 1.0 / down)
        assert min(abs(1.0 - R * ki.k1 - 1.0 / up),
                   abs(1.0 - R * ki.k2 - 1.0 / up)) < 1e-12 * max(1.0, 1.0 / up)


def test_offset_identity_against_analytic_charts():
    # The offset walls of a sphere tube are themselves spheres; compare the
    # algebraic transform against curvatures computed on those charts.  The
    # walls are oriented into the tube, so the outer wall's chart normal
    # (away from its own body) is the flip of the stored orientation.
    rho, R = 2.0, 0.75
    pair = principal_curvatures(make_surface("sphere", rho=rho), (1.0, 1.0))
    outer, inner = offset_curvatures(pair, R)
    outer_chart = principal_curvatures(make_surface("sphere", rho=rho + R), (1.0, 1.0))
    inner_chart = principal_curvatures(make_surface("sphere", rho=rho - R), (1.0, 1.0))
    assert outer.k1 == pytest.approx(-outer_chart.k2, abs=1e-8)
    assert inner.k1 == pytest.approx(inner_chart.k1, abs=1e-8)

    pair = principal_curvatures(make_surface("cylinder", rho=rho), (0.0, 0.5))
    outer, inner = offset_curvatures(pair, R)
    outer_chart = principal_curvatures(make_surface("cylinder", rho=rho + R), (0.0, 0.5))
    inner_chart = principal_curvatures(make_surface("cylinder", rho=rho - R), (0.0, 0.5))
    assert outer.k2 == pytest.approx(-inner_chart_k(outer_chart), abs=1e-8)
    assert inner.k1 == pytest.approx(inner_chart.k1, abs=1e-8)


def inner_chart_k(pair):
    # the cylinder's curved direction (the nonzero one)
    return pair.k1 if abs(pair.k1) > abs(pair.k2) else pair.k2


def test_offset_rejects_inadmissible_radius():
    with pytest.raises(GeometryError):
        offset_curvatures(CurvaturePair(-0.5, -0.5), 2.0)


def test_foot_points_geometry(sphere_chart):
    fp = foot_points(sphere_chart, (0.8, 1.9), radius=0.5)
    assert np.linalg.norm(fp.outer - fp.base) == pytest.approx(0.5, abs=1e-12)
    assert np.linalg.norm(fp.inner - fp.base) == pytest.approx(0.5, abs=1e-12)
    assert np.linalg.norm(fp.outer - fp.inner) == pytest.approx(1.0, abs=1e-12)
    # on a sphere of radius 2 the feet land on radii 2.5 and 1.5
    assert np.linalg.norm(fp.outer) == pytest.approx(2.5, abs=1e-10)
    assert np.linalg.norm(fp.inner) == pytest.approx(1.5, abs=1e-10)


def test_foot_points_rejects_radius_beyond_focal_distance(sphere_chart):
    with pytest.raises(GeometryError):
        foot_points(sphere_chart, (1.0, 1.0), radius=2.0)


# --- admissibility bound ---------------------------------------------------


def test_bound_check_sphere(sphere_chart):
    # the discriminant of the shape operator cancels at umbilics, so the
    # recovered pair can split by ~1e-8 there
    ok = curvature_bound_check(sphere_chart, radius=1.0)
    assert ok.passed and ok.sup_rk == pytest.approx(0.5, abs=1e-7)
    bad = curvature_bound_check(sphere_chart, radius=3.0)
    assert not bad.passed and bad.sup_rk == pytest.approx(1.5, abs=1e-6)


def test_bound_check_torus_worst_point_is_tube_circle(torus_chart):
    check = curvature_bound_check(torus_chart, radius=0.4)
    assert check.passed
    assert check.sup_rk == pytest.approx(0.4, abs=1e-12)


def test_bound_check_rejects_nonpositive_radius(plane_chart):
    with pytest.raises(GeometryError):
        curvature_bound_check(plane_chart, radius=0.0)


# --- signed distance -------------------------------------------------------


@pytest.mark.parametrize("kind,params,uv", [
    ("sphere", {"rho": 2.0}, (1.2, 0.8)),
    ("plane", {}, (0.5, -1.0)),
    ("cylinder", {"rho": 2.0}, (0.7, 1.3)),
    ("torus", {"a": 1.0, "b": 3.0}, (2.2, 4.0)),
    ("helicoid", {"pitch": 1.0}, (1.5, 2.5)),
    ("graph", {"amplitude": 0.1, "waves": (1.0, 1.0)}, (0.9, -0.4)),
])
def test_signed_distance_along_normal(kind, params, uv):
    chart = make_surface(kind, **params)
    p, n, _ = surface_frame(chart, uv)
    for s in (-0.3, -0.05, 0.02, 0.25):
        d = signed_distance(p + s * n, chart)
        assert d == pytest.approx(s, abs=1e-8)


def test_signed_distance_sphere_closed_form(sphere_chart):
    pts = np.array([[3.0, 0.0, 0.0], [0.0, 0.5, 0.0], [1.0, 1.0, 1.0]])
    d = signed_distances(pts, sphere_chart)
    expected = np.linalg.norm(pts, axis=1) - 2.0
    assert np.allclose(d, expected, atol=1e-12)


def test_helicoid_exact_distance_matches_projection(helicoid_chart):
    # dual route: the closed-form ruling distance against generic Newton
    # projection onto the chart
    rng = np.random.default_rng(7)
    uv = np.column_stack([rng.uniform(-2, 2, 8), rng.uniform(-2, 2, 8)])
    for u, v in uv:
        p, n, _ = surface_frame(helicoid_chart, (u, v))
        q = p + 0.2 * n
        d_exact = signed_distance(q, helicoid_chart)
        (pu, pv), d2 = project_to_surface(q, helicoid_chart)
        foot = helicoid_chart.point(pu, pv)
        assert abs(abs(d_exact) - np.linalg.norm(q - foot)) < 1e-8
        assert d_exact == pytest.approx(0.2, abs=1e-8)


def test_classify_point_regions(sphere_chart):
    assert classify_point(np.array([4.0, 0.0, 0.0]), sphere_chart, 1.0) == "outer"
    assert classify_point(np.array([0.2, 0.0, 0.0]), sphere_chart, 1.0) == "inner"
    assert classify_point(np.array([2.3, 0.0, 0.0]), sphere_chart, 1.0) == "tube"


def test_projection_recovers_surface_points(torus_chart):
    rng = np.random.default_rng(11)
    for _ in range(6):
        u, v = rng.uniform(0, 2 * math.pi, 2)
        p = torus_chart.point(u, v)
        (pu, pv), d2 = project_to_surface(p, torus_chart)
        assert d2 < 1e-16
        assert np.allclose(torus_chart.point(pu, pv), p, atol=1e-8)


def test_grid_region_subsetting(plane_chart):
    U, V = plane_chart.grid(4, 4, region=((0.0, 1.0), (2.0, 3.0)))
    assert U.min() > 0.0 and U.max() < 1.0
    assert V.min() > 2.0 and V.max() < 3.0
    assert U.shape == (4, 4)


def test_curvature_grid_vectorizes(torus_chart):
    U, V = torus_chart.grid(12, 8)
    k1, k2 = curvature_grid(torus_chart, U, V)
    assert k1.shape == (12, 8)
    assert np.all(k1 <= k2 + 1e-15)
