"""Surface catalog with curvature, offsets, and signed distance.

Every chart parametrizes an oriented surface ``sigma(u, v)`` in R^3 that
bounds a reference body.  The unit normal points away from the body, into
the far component of the complement; with this orientation a sphere of
radius ``rho`` enclosing the body has principal curvatures k1 = k2 = -1/rho.

The tube of half-width R around a surface is the set of points at unsigned
distance below R.  Its two walls are the offset surfaces at distance R: the
outer wall on the far side (positive signed distance), the inner wall on
the body side.  Offsets are embedded exactly when R * max|k_j| < 1, which
is what :func:`curvature_bound_check` enforces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

REGION_OUTER = "outer"
REGION_INNER = "inner"
REGION_TUBE = "tube"

SURFACE_KINDS = ("plane", "sphere", "cylinder", "torus", "helicoid", "graph")


class GeometryError(ValueError):
    """Raised for inadmissible geometric configurations."""


@dataclass(frozen=True)
class CurvaturePair:
    """Ordered principal curvatures at a surface point (k1 <= k2)."""

    k1: float
    k2: float

    def __post_init__(self):
        if self.k1 > self.k2:
            raise ValueError("principal curvatures must satisfy k1 <= k2")

    @property
    def mean(self) -> float:
        return 0.5 * (self.k1 + self.k2)

    @property
    def gauss(self) -> float:
        return self.k1 * self.k2

    @property
    def gap(self) -> float:
        return self.k2 - self.k1

    @staticmethod
    def of(a: float, b: float) -> "CurvaturePair":
        a, b = float(a), float(b)
        return CurvaturePair(min(a, b), max(a, b))


@dataclass(frozen=True)
class FootPoints:
    """A surface point with its two offset foot points at distance R."""

    base: np.ndarray
    outer: np.ndarray
    inner: np.ndarray
    radius: float


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    sup_rk: float
    worst_uv: tuple
    radius: float


class SurfaceChart:
    """A parametrized surface with analytic first and second derivatives.

    All evaluators are vectorized: ``u`` and ``v`` may be scalars or
    broadcastable arrays, and points come back stacked on the last axis.
    ``normal_sign`` flips the raw cross product ``sigma_u x sigma_v`` so the
    stored orientation always points away from the body.
    """

    def __init__(self, kind, params, rect, point, first, second,
                 normal_sign=1.0, exact_distance=None):
        self.kind = kind
        self.params = dict(params)
        self.rect = tuple((float(a), float(b)) for a, b in rect)
        self._point = point
        self._first = first
        self._second = second
        self.normal_sign = float(normal_sign)
        self._exact_distance = exact_distance

    def __repr__(self):
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"SurfaceChart({self.kind}, {inner})"

    def point(self, u, v):
        return self._point(np.asarray(u, float), np.asarray(v, float))

    def first_derivatives(self, u, v):
        return self._first(np.asarray(u, float), np.asarray(v, float))

    def second_derivatives(self, u, v):
        return self._second(np.asarray(u, float), np.asarray(v, float))

    def normal(self, u, v):
        su, sv = self.first_derivatives(u, v)
        n = np.cross(su, sv) * self.normal_sign
        norm = np.linalg.norm(n, axis=-1, keepdims=True)
        if np.any(norm == 0.0):
            raise GeometryError(f"degenerate chart point on {self.kind}")
        return n / norm

    @property
    def has_exact_distance(self) -> bool:
        return self._exact_distance is not None

    def grid(self, nu, nv, region=None):
        """Interior grid of parameter samples (endpoints excluded)."""
        (u0, u1), (v0, v1) = region if region is not None else self.rect
        u = u0 + (u1 - u0) * (np.arange(nu) + 0.5) / nu
        v = v0 + (v1 - v0) * (np.arange(nv) + 0.5) / nv
        return np.meshgrid(u, v, indexing="ij")


# ---------------------------------------------------------------------------
# catalog


def _plane(half_width=6.0):
    hw = float(half_width)
    zeros = lambda u: np.zeros_like(u)

    def point(u, v):
        return np.stack([u, v, np.zeros(np.broadcast(u, v).shape)], axis=-1)

    def first(u, v):
        shape = np.broadcast(u, v).shape
        su = np.broadcast_to(np.array([1.0, 0.0, 0.0]), shape + (3,))
        sv = np.broadcast_to(np.array([0.0, 1.0, 0.0]), shape + (3,))
        return su.copy(), sv.copy()

    def second(u, v):
        shape = np.broadcast(u, v).shape
        z = np.zeros(shape + (3,))
        return z, z.copy(), z.copy()

    def distance(pts):
        return np.asarray(pts, float)[..., 2]

    return SurfaceChart("plane", {"half_width": hw},
                        ((-hw, hw), (-hw, hw)), point, first, second,
                        exact_distance=distance)


def _sphere(rho):
    rho = float(rho)
    if rho <= 0:
        raise GeometryError("sphere radius must be positive")

    def point(u, v):
        return rho * np.stack([np.sin(u) * np.cos(v),
                               np.sin(u) * np.sin(v),
                               np.cos(u) * np.ones_like(v)], axis=-1)

    def first(u, v):
        su = rho * np.stack([np.cos(u) * np.cos(v),
                             np.cos(u) * np.sin(v),
                             -np.sin(u) * np.ones_like(v)], axis=-1)
        sv = rho * np.stack([-np.sin(u) * np.sin(v),
                             np.sin(u) * np.cos(v),
                             np.zeros(np.broadcast(u, v).shape)], axis=-1)
        return su, sv

    def second(u, v):
        suu = -point(u, v)
        suv = rho * np.stack([-np.cos(u) * np.sin(v),
                              np.cos(u) * np.cos(v),
                              np.zeros(np.broadcast(u, v).shape)], axis=-1)
        svv = rho * np.stack([-np.sin(u) * np.cos(v),
                              -np.sin(u) * np.sin(v),
                              np.zeros(np.broadcast(u, v).shape)], axis=-1)
        return suu, suv, svv

    def distance(pts):
        return np.linalg.norm(np.asarray(pts, float), axis=-1) - rho

    return SurfaceChart("sphere", {"rho": rho},
                        ((0.1, math.pi - 0.1), (0.0, 2.0 * math.pi)),
                        point, first, second, exact_distance=distance)


def _cylinder(rho, half_length=6.0):
    rho, hl = float(rho), float(half_length)
    if rho <= 0:
        raise GeometryError("cylinder radius must be positive")

    def point(u, v):
        return np.stack([rho * np.cos(u), rho * np.sin(u),
                         v * np.ones(np.broadcast(u, v).shape)], axis=-1)

    def first(u, v):
        shape = np.broadcast(u, v).shape
        su = np.stack([-rho * np.sin(u), rho * np.cos(u),
                       np.zeros(shape)], axis=-1)
        sv = np.broadcast_to(np.array([0.0, 0.0, 1.0]), shape + (3,)).copy()
        return su, sv

    def second(u, v):
        shape = np.broadcast(u, v).shape
        suu = np.stack([-rho * np.cos(u), -rho * np.sin(u),
                        np.zeros(shape)], axis=-1)
        z = np.zeros(shape + (3,))
        return suu, z, z.copy()

    def distance(pts):
        pts = np.asarray(pts, float)
        return np.hypot(pts[..., 0], pts[..., 1]) - rho

    return SurfaceChart("cylinder", {"rho": rho, "half_length": hl},
                        ((0.0, 2.0 * math.pi), (-hl, hl)),
                        point, first, second, exact_distance=distance)


def _torus(a, b):
    a, b = float(a), float(b)
    if not 0 < a < b:
        raise GeometryError("torus needs 0 < tube radius a < ring radius b")

    def point(u, v):
        w = b + a * np.cos(u)
        return np.stack([w * np.cos(v), w * np.sin(v),
                         a * np.sin(u) * np.ones_like(v)], axis=-1)

    def first(u, v):
        w = b + a * np.cos(u)
        su = np.stack([-a * np.sin(u) * np.cos(v),
                       -a * np.sin(u) * np.sin(v),
                       a * np.cos(u) * np.ones_like(v)], axis=-1)
        sv = np.stack([-w * np.sin(v), w * np.cos(v),
                       np.zeros(np.broadcast(u, v).shape)], axis=-1)
        return su, sv

    def second(u, v):
        w = b + a * np.cos(u)
        suu = np.stack([-a * np.cos(u) * np.cos(v),
                        -a * np.cos(u) * np.sin(v),
                        -a * np.sin(u) * np.ones_like(v)], axis=-1)
        suv = np.stack([a * np.sin(u) * np.sin(v),
                        -a * np.sin(u) * np.cos(v),
                        np.zeros(np.broadcast(u, v).shape)], axis=-1)
        svv = np.stack([-w * np.cos(v), -w * np.sin(v),
                        np.zeros(np.broadcast(u, v).shape)], axis=-1)
        return suu, suv, svv

    def distance(pts):
        pts = np.asarray(pts, float)
        ring = np.hypot(np.hypot(pts[..., 0], pts[..., 1]) - b, pts[..., 2])
        return ring - a

    # raw cross product points toward the ring axis; flip it outward
    return SurfaceChart("torus", {"a": a, "b": b},
                        ((0.0, 2.0 * math.pi), (0.0, 2.0 * math.pi)),
                        point, first, second, normal_sign=-1.0,
                        exact_distance=distance)


def _helicoid(pitch=1.0, u_max=6.0, v_max=2.0 * math.pi):
    b, um, vm = float(pitch), float(u_max), float(v_max)
    if b <= 0:
        raise GeometryError("helicoid pitch must be positive")

    def point(u, v):
        return np.stack([u * np.cos(v), u * np.sin(v),
                         b * v * np.ones_like(u)], axis=-1)

    def first(u, v):
        shape = np.broadcast(u, v).shape
        su = np.stack([np.cos(v), np.sin(v), np.zeros(shape)], axis=-1)
        sv = np.stack([-u * np.sin(v), u * np.cos(v),
                       b * np.ones(shape)], axis=-1)
        return su, sv

    def second(u, v):
        shape = np.broadcast(u, v).shape
        suu = np.zeros(shape + (3,))
        suv = np.stack([-np.sin(v), np.cos(v), np.zeros(shape)], axis=-1)
        svv = np.stack([-u * np.cos(v), -u * np.sin(v),
                        np.zeros(shape)], axis=-1)
        return suu, suv, svv

    def distance(pts):
        return _helicoid_distance(np.asarray(pts, float), b)

    return SurfaceChart("helicoid", {"pitch": b, "u_max": um, "v_max": vm},
                        ((-um, um), (-vm, vm)), point, first, second,
                        exact_distance=distance)


def _graph(amplitude=0.1, waves=(1.0, 1.0), half_width=None):
    eps = float(amplitude)
    k1, k2 = (float(w) for w in waves)
    hw = float(half_width) if half_width is not None else math.pi / max(k1, k2)

    def height(u, v):
        return eps * np.sin(k1 * u) * np.sin(k2 * v)

    def point(u, v):
        return np.stack([u * np.ones_like(v), v * np.ones_like(u),
                         height(u, v)], axis=-1)

    def first(u, v):
        shape = np.broadcast(u, v).shape
        hu = eps * k1 * np.cos(k1 * u) * np.sin(k2 * v)
        hv = eps * k2 * np.sin(k1 * u) * np.cos(k2 * v)
        su = np.stack([np.ones(shape), np.zeros(shape), hu * np.ones(shape)],
                      axis=-1)
        sv = np.stack([np.zeros(shape), np.ones(shape), hv * np.ones(shape)],
                      axis=-1)
        return su, sv

    def second(u, v):
        shape = np.broadcast(u, v).shape
        zero = np.zeros(shape)
        huu = -eps * k1 * k1 * np.sin(k1 * u) * np.sin(k2 * v)
        huv = eps * k1 * k2 * np.cos(k1 * u) * np.cos(k2 * v)
        hvv = -eps * k2 * k2 * np.sin(k1 * u) * np.sin(k2 * v)
        pack = lambda h: np.stack([zero, zero, h * np.ones(shape)], axis=-1)
        return pack(huu), pack(huv), pack(hvv)

    return SurfaceChart("graph",
                        {"amplitude": eps, "k1": k1, "k2": k2,
                         "half_width": hw},
                        ((-hw, hw), (-hw, hw)), point, first, second)


_FACTORIES = {
    "plane": _plane,
    "sphere": _sphere,
    "cylinder": _cylinder,
    "torus": _torus,
    "helicoid": _helicoid,
    "graph": _graph,
}


def make_surface(kind, **params) -> SurfaceChart:
    """Build a catalog chart: plane, sphere, cylinder, torus, helicoid, graph."""
    try:
        factory = _FACTORIES[kind]
    except KeyError:
        raise GeometryError(f"unknown surface kind {kind!r}; "
                            f"expected one of {SURFACE_KINDS}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# frames and curvature


def surface_frame(chart, uv):
    """Point, outward unit normal, and orthonormal tangent basis at ``uv``."""
    u, v = float(uv[0]), float(uv[1])
    p = chart.point(u, v)
    n = chart.normal(u, v)
    su, _ = chart.first_derivatives(u, v)
    t1 = su / np.linalg.norm(su)
    t2 = np.cross(n, t1)
    return p, n, (t1, t2)


def curvature_grid(chart, u, v):
    """Principal curvature arrays (k1 <= k2) on broadcastable parameters.

    The shape operator is assembled from the first and second fundamental
    forms; its eigenvalues solve

        (EG - F^2) k^2 - (eG - 2fF + gE) k + (eg - f^2) = 0.
    """
    su, sv = chart.first_derivatives(u, v)
    suu, suv, svv = chart.second_derivatives(u, v)
    n = chart.normal(u, v)

    E = np.einsum("...i,...i", su, su)
    F = np.einsum("...i,...i", su, sv)
    G = np.einsum("...i,...i", sv, sv)
    e = np.einsum("...i,...i", suu, n)
    f = np.einsum("...i,...i", suv, n)
    g = np.einsum("...i,...i", svv, n)

    det1 = E * G - F * F
    if np.any(det1 <= 0.0):
        raise GeometryError(f"chart {chart.kind} degenerates on this region")
    trace = e * G - 2.0 * f * F + g * E
    det2 = e * g - f * f
    disc = np.maximum(trace * trace - 4.0 * det1 * det2, 0.0)
    root = np.sqrt(disc)
    k1 = (trace - root) / (2.0 * det1)
    k2 = (trace + root) / (2.0 * det1)
    return k1, k2


def principal_curvatures(chart, uv) -> CurvaturePair:
    """Principal curvatures at a single parameter point, ordered k1 <= k2."""
    k1, k2 = curvature_grid(chart, float(uv[0]), float(uv[1]))
    return CurvaturePair(float(k1), float(k2))


def curvature_samples(chart, nu=48, nv=48, region=None):
    """Grid sample of position and curvature, as a dict of flat arrays."""
    U, V = chart.grid(nu, nv, region)
    pts = chart.point(U, V)
    k1, k2 = curvature_grid(chart, U, V)
    return {
        "u": U.ravel(), "v": V.ravel(),
        "x": pts[..., 0].ravel(), "y": pts[..., 1].ravel(),
        "z": pts[..., 2].ravel(),
        "k1": k1.ravel(), "k2": k2.ravel(),
        "H": (0.5 * (k1 + k2)).ravel(), "K": (k1 * k2).ravel(),
    }


def curvature_bound_check(chart, radius, region=None, nu=64, nv=64):
    """Check R * max(|k1|, |k2|) < 1 over a parameter grid.

    A failing check means the offset walls at distance ``radius`` would
    self-intersect somewhere, so every downstream computation refuses to run.
    """
    if radius <= 0:
        raise GeometryError("tube half-width must be positive")
    U, V = chart.grid(nu, nv, region)
    k1, k2 = curvature_grid(chart, U, V)
    rk = radius * np.maximum(np.abs(k1), np.abs(k2))
    idx = np.unravel_index(np.argmax(rk), rk.shape)
    sup = float(rk[idx])
    return BoundCheck(passed=bool(sup < 1.0), sup_rk=sup,
                      worst_uv=(float(U[idx]), float(V[idx])),
                      radius=float(radius))


def foot_points(chart, uv, radius) -> FootPoints:
    """Offset foot points ``x +- R n`` on the two tube walls."""
    pair = principal_curvatures(chart, uv)
    if radius * max(abs(pair.k1), abs(pair.k2)) >= 1.0:
        raise GeometryError("offset undefined: R * |curvature| >= 1 at uv")
    p, n, _ = surface_frame(chart, uv)
    return FootPoints(base=p, outer=p + radius * n, inner=p - radius * n,
                      radius=float(radius))


def offset_curvatures(pair: CurvaturePair, radius):
    """Principal curvatures of the two offset walls at the foot points.

    The walls are oriented by the normal pointing back into the tube.  Each
    principal direction is preserved, and the curvatures transform as

        k_outer = -k / (1 - R k),      k_inner = k / (1 + R k),

    equivalently 1 - R*k_outer = 1/(1 - R*k) and
    1 - R*k_inner = 1/(1 + R*k), both of which stay positive exactly when
    R * |k| < 1.

    Returns
    -------
    (outer, inner) : tuple of CurvaturePair
    """
    R = float(radius)
    ks = np.array([pair.k1, pair.k2])
    down, up = 1.0 - R * ks, 1.0 + R * ks
    if np.any(down <= 0.0) or np.any(up <= 0.0):
        raise GeometryError("offset undefined: R * |curvature| >= 1")
    outer = CurvaturePair.of(*(-ks / down))
    inner = CurvaturePair.of(*(ks / up))
    return outer, inner


# ---------------------------------------------------------------------------
# distance


def _helicoid_distance(pts, b):
    """Unsigned-distance-with-sign to the full helicoid z = b * angle.

    Squared distance from p to the ruling at sweep angle v reduces, after
    minimizing over the ruling coordinate, to

        f(v) = r^2 sin^2(v - theta) + (z - b v)^2,

    with (r, theta) the cylindrical coordinates of p.  The sheets of the
    surface over (x, y) sit at v = theta + k pi.  We seed one candidate per
    nearby sheet, polish each by damped Newton, and keep the best.  The side
    is the sign of sin(z/b - theta), which vanishes exactly on the surface.
    """
    pts = np.atleast_2d(np.asarray(pts, float))
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)

    k0 = np.round((z / b - theta) / math.pi)
    offsets = np.arange(-3, 4)
    v = theta[..., None] + (k0[..., None] + offsets) * math.pi

    rr = (r * r)[..., None]
    zz = z[..., None]
    for _ in range(40):
        dv = v - theta[..., None]
        f1 = rr * np.sin(2.0 * dv) - 2.0 * b * (zz - b * v)
        f2 = 2.0 * rr * np.cos(2.0 * dv) + 2.0 * b * b
        step = f1 / np.where(f2 > 1e-12, f2, 1e-12)
        np.clip(step, -0.7, 0.7, out=step)
        v = v - step

    dv = v - theta[..., None]
    f = rr * np.sin(dv) ** 2 + (zz - b * v) ** 2
    dist = np.sqrt(np.min(f, axis=-1))
    side = np.sign(np.sin(z / b - theta))
    side = np.where(side == 0.0, 1.0, side)
    out = side * dist
    return out.reshape(np.asarray(pts).shape[:-1])


def _coarse_starts(chart, n=12):
    (u0, u1), (v0, v1) = chart.rect
    u = np.linspace(u0, u1, n)
    v = np.linspace(v0, v1, n)
    return np.meshgrid(u, v, indexing="ij")


def project_to_surface(point, chart, tol=1e-10, max_iter=80):
    """Nearest-point parameters on the chart by damped Newton descent.

    Minimizes |p - sigma(u, v)|^2 from the best few coarse-grid seeds,
    halving steps that fail to decrease the objective and clamping to the
    parameter rectangle.  Returns (uv, squared distance).
    """
    p = np.asarray(point, float)
    (u0, u1), (v0, v1) = chart.rect

    U, V = _coarse_starts(chart)
    d2 = np.sum((chart.point(U, V) - p) ** 2, axis=-1)
    order = np.argsort(d2.ravel())[:4]
    seeds = [(U.ravel()[i], V.ravel()[i]) for i in order]

    best_uv, best_d2 = seeds[0], float(d2.ravel()[order[0]])
    scale = max(u1 - u0, v1 - v0)
    for u, v in seeds:
        f_old = float(np.sum((chart.point(u, v) - p) ** 2))
        for _ in range(max_iter):
            su, sv = chart.first_derivatives(u, v)
            suu, suv, svv = chart.second_derivatives(u, v)
            q = chart.point(u, v)
            rvec = q - p
            grad = 2.0 * np.array([rvec @ su, rvec @ sv])
            hess = 2.0 * np.array([
                [su @ su + rvec @ suu, su @ sv + rvec @ suv],
                [su @ sv + rvec @ suv, sv @ sv + rvec @ svv],
            ])
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                step = -grad
            # fall back toward steepest descent when the Hessian misleads
            for _damp in range(25):
                un = min(max(u + step[0], u0), u1)
                vn = min(max(v + step[1], v0), v1)
                f_new = float(np.sum((chart.point(un, vn) - p) ** 2))
                if f_new <= f_old:
                    break
                step *= 0.5
            moved = math.hypot(un - u, vn - v)
            u, v, f_old = un, vn, f_new
            if moved < tol * scale:
                break
        if f_old < best_d2:
            best_uv, best_d2 = (u, v), f_old
    return best_uv, best_d2


def signed_distance(point, chart):
    """Signed distance to the surface: positive on the far side of the body.

    Charts with a closed-form distance use it; otherwise the nearest point
    is found by multistart Newton projection and the sign is taken from the
    outward normal at the foot.
    """
    p = np.asarray(point, float)
    if chart.has_exact_distance:
        return float(chart._exact_distance(p[None, :])[0])
    (u, v), d2 = project_to_surface(p, chart)
    n = chart.normal(u, v)
    q = chart.point(u, v)
    return float(math.copysign(math.sqrt(d2), float((p - q) @ n)))


def signed_distances(points, chart):
    """Vectorized :func:`signed_distance` over an (n, 3) array."""
    pts = np.atleast_2d(np.asarray(points, float))
    if chart.has_exact_distance:
        return np.asarray(chart._exact_distance(pts), float)
    return np.array([signed_distance(p, chart) for p in pts])


def classify_point(point, chart, radius) -> str:
    """Which region a point falls in: tube, outer, or inner."""
    d = signed_distance(point, chart)
    if d > radius:
        return REGION_OUTER
    if d < -radius:
        return REGION_INNER
    return REGION_TUBE
