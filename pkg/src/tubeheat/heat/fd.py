"""Finite-difference solvers for the wall boundary-value problems.

All solvers march the heat equation from a cold start with fixed wall
values.  Time integration is Crank-Nicolson with two implicit-Euler
startup steps (the wall data jumps at t = 0, and the startup damps the
oscillations Crank-Nicolson would otherwise ring with); an explicit mode
is retained as an independent cross-check and enforces the usual
dt <= h^2 / (2 N) stability bound.

The 1-D solvers handle radially symmetric tubes (sphere walls) and flat
slabs exactly on the interval between the walls.  The 3-D solver works on
a Cartesian grid classified by signed distance, imposing wall values
through first-order interpolation at the cut cells.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.sparse.linalg import splu

from ..surfaces import GeometryError, signed_distances
from .problems import TemperatureField, _RANGES


def _default_dt(times):
    return min(1e-3, float(times[0]) / 20.0)


def _wall_problem(boundary):
    """Problem label carried by a solved field, derived from wall values."""
    pair = tuple(float(b) for b in boundary)
    if pair == (1.0, 1.0):
        return "ibvp_ones"
    if pair == (1.0, -1.0):
        return "ibvp_pm"
    return "ibvp"


def _segments(times, dt):
    """Yield (t_start, n_steps, local_dt) covering [0, max(times)] exactly."""
    prev = 0.0
    for t in times:
        span = t - prev
        if span <= 0:
            raise ValueError("times must be strictly increasing and positive")
        n = max(1, int(math.ceil(span / dt - 1e-12)))
        yield prev, n, span / n
        prev = t


def _march_1d(nodes, coeff, boundary, times, dt, mode):
    """March u_t = u'' + coeff(r) u' on ``nodes`` with Dirichlet ends.

    ``boundary`` is (value at nodes[-1], value at nodes[0]), matching the
    (outer, inner) wall convention.  Returns (len(times), len(nodes)).
    """
    h = nodes[1] - nodes[0]
    n = len(nodes)
    b_hi, b_lo = float(boundary[0]), float(boundary[1])

    c = coeff(nodes[1:-1])
    lower = 1.0 / h**2 - c / (2.0 * h)   # multiplies u_{i-1}
    diag = -2.0 / h**2 * np.ones(n - 2)
    upper = 1.0 / h**2 + c / (2.0 * h)   # multiplies u_{i+1}

    def apply_L(u):
        out = lower * u[:-2] + diag * u[1:-1] + upper * u[2:]
        return out

    def banded(theta, local_dt):
        # rows of (I - theta*dt*L) in solve_banded layout
        ab = np.zeros((3, n - 2))
        ab[0, 1:] = -theta * local_dt * upper[:-1]
        ab[1, :] = 1.0 - theta * local_dt * diag
        ab[2, :-1] = -theta * local_dt * lower[1:]
        return ab

    u = np.zeros(n)
    u[0], u[-1] = b_lo, b_hi
    snapshots = np.empty((len(times), n))
    first_steps = 2 if mode == "implicit" else 0

    step_count = 0
    for idx, (t0, nsteps, local_dt) in enumerate(_segments(times, dt)):
        if mode == "explicit":
            cfl = h**2 / (2.0 * getattr(coeff, "dim", 1))
            if local_dt > cfl * (1.0 + 1e-12):
                sub = int(math.ceil(local_dt / cfl))
                nsteps, local_dt = nsteps * sub, local_dt / sub
        for _ in range(nsteps):
            if mode == "explicit":
                u[1:-1] += local_dt * apply_L(u)
            else:
                theta = 1.0 if step_count < first_steps else 0.5
                rhs = u[1:-1] + (1.0 - theta) * local_dt * apply_L(u)
                rhs[0] += theta * local_dt * lower[0] * b_lo
                rhs[-1] += theta * local_dt * upper[-1] * b_hi
                u[1:-1] = solve_banded((1, 1), banded(theta, local_dt), rhs)
            step_count += 1
        snapshots[idx] = u
    return snapshots


def _snapshot_index(times, t):
    times = np.asarray(times, float)
    i = int(np.argmin(np.abs(times - t)))
    if abs(times[i] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError(f"time {t} was not among the solved snapshots")
    return i


def solve_ibvp_radial(rho, radius, boundary, times, dim=3, nr=401,
                      dt=None, mode="implicit") -> TemperatureField:
    """Solve between spherical walls at rho - R and rho + R.

    ``boundary`` is (outer wall value, inner wall value).  The radial heat
    operator in ``dim`` ambient dimensions is u_rr + (dim-1)/r u_r; the
    returned field evaluates by radius with linear interpolation and only
    at the requested snapshot times.
    """
    rho, radius = float(rho), float(radius)
    if rho - radius <= 0:
        raise GeometryError("inner wall radius must stay positive")
    times = tuple(float(t) for t in times)
    nodes = np.linspace(rho - radius, rho + radius, nr)
    dt = dt if dt is not None else _default_dt(times)

    def coeff(r):
        return (dim - 1.0) / r
    coeff.dim = dim

    snaps = _march_1d(nodes, coeff, boundary, times, dt, mode)
    h = nodes[1] - nodes[0]

    def evaluate(point, t):
        i = _snapshot_index(times, t)
        r = float(np.linalg.norm(np.asarray(point, float)))
        if not nodes[0] - 1e-9 <= r <= nodes[-1] + 1e-9:
            raise ValueError("probe lies outside the tube")
        val = float(np.interp(r, nodes, snaps[i]))
        return val, 4.0 * h * h + dt * dt

    def profile(points, t):
        i = _snapshot_index(times, t)
        r = np.linalg.norm(np.asarray(points, float), axis=-1)
        return np.interp(r, nodes, snaps[i])

    name = _wall_problem(boundary)
    rng = _RANGES.get(name, (None, None))
    fld = TemperatureField(evaluate=evaluate, provenance=f"radial-fd-{mode}",
                           problem=name, value_range=rng, times=times,
                           meta={"nr": nr, "dt": dt, "h": h,
                                 "nodes": nodes, "snapshots": snaps})
    fld.profile = profile
    return fld


def solve_ibvp_slab(radius, boundary, times, nz=401, dt=None,
                    mode="implicit") -> TemperatureField:
    """Solve between flat walls at heights -R and +R.

    ``boundary`` is (value at +R, value at -R); the field reads the height
    off a probe's last coordinate.
    """
    radius = float(radius)
    times = tuple(float(t) for t in times)
    nodes = np.linspace(-radius, radius, nz)
    dt = dt if dt is not None else _default_dt(times)

    def coeff(r):
        return np.zeros_like(r)
    coeff.dim = 1

    snaps = _march_1d(nodes, coeff, boundary, times, dt, mode)
    h = nodes[1] - nodes[0]

    def evaluate(point, t):
        i = _snapshot_index(times, t)
        z = float(np.asarray(point, float).reshape(-1)[-1])
        if not -radius - 1e-9 <= z <= radius + 1e-9:
            raise ValueError("probe lies outside the slab")
        return float(np.interp(z, nodes, snaps[i])), 4.0 * h * h + dt * dt

    def profile(points, t):
        i = _snapshot_index(times, t)
        z = np.asarray(points, float)[..., -1]
        return np.interp(z, nodes, snaps[i])

    name = _wall_problem(boundary)
    fld = TemperatureField(evaluate=evaluate, provenance=f"slab-fd-{mode}",
                           problem=name, value_range=_RANGES.get(name, (None, None)),
                           times=times,
                           meta={"nz": nz, "dt": dt, "h": h,
                                 "nodes": nodes, "snapshots": snaps})
    fld.profile = profile
    return fld


def _tube_box(chart, radius, h, region):
    U, V = chart.grid(64, 64, region)
    pts = chart.point(U, V).reshape(-1, 3)
    lo = pts.min(axis=0) - radius - 2.5 * h
    hi = pts.max(axis=0) + radius + 2.5 * h
    axes = [np.arange(lo[k], hi[k] + h, h) for k in range(3)]
    return axes


def solve_ibvp_3d(chart, radius, boundary, times, h=None, region=None,
                  dt=None, mode="implicit", theta_min=0.2) -> TemperatureField:
    """Solve on the tube around an arbitrary chart, Cartesian grid.

    Wall values enter through the cut cells: for an interior node whose
    neighbor has crossed a wall, the neighbor value is eliminated by linear
    interpolation of the wall value at the crossing fraction theta (clamped
    below by ``theta_min``).  Explicit mode skips the interpolation and
    holds ghost nodes at the wall value directly, which is cruder but
    unconditionally monotone; it is meant for cross-checks.

    For charts that are unbounded (plane, cylinder, ...), pass ``region``
    to restrict the parameter rectangle; the lateral truncation faces get
    zero-flux conditions, which is immaterial as long as the probes stay
    further than the heat influence length ~ sqrt(4 t) * 5 from the faces.
    """
    radius = float(radius)
    h = h if h is not None else radius / 6.0
    if 2.0 * radius / h < 8.0 - 1e-9:
        raise GeometryError("grid too coarse: fewer than 8 cells across the tube")
    times = tuple(float(t) for t in times)
    dt = dt if dt is not None else _default_dt(times)

    axes = _tube_box(chart, radius, h, region)
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    shape = X.shape
    pts = np.stack([X, Y, Z], axis=-1).reshape(-1, 3)
    d = signed_distances(pts, chart).reshape(shape)

    interior = np.abs(d) < radius
    n_int = int(interior.sum())
    if n_int == 0:
        raise GeometryError("no grid nodes inside the tube")
    index = -np.ones(shape, dtype=np.int64)
    index[interior] = np.arange(n_int)

    b_outer, b_inner = float(boundary[0]), float(boundary[1])
    ghost_value = np.where(d >= 0, b_outer, b_inner)

    rows, cols, vals = [], [], []
    diag = np.zeros(n_int)
    source = np.zeros(n_int)
    inv_h2 = 1.0 / (h * h)

    ii, jj, kk = np.nonzero(interior)
    me = index[ii, jj, kk]
    d_here = d[ii, jj, kk]
    for axis, size in enumerate(shape):
        for sign in (-1, 1):
            shift = [ii, jj, kk][axis] + sign
            inside_box = (shift >= 0) & (shift < size)
            nb = [ii.copy(), jj.copy(), kk.copy()]
            nb[axis] = np.clip(shift, 0, size - 1)
            nb_interior = interior[nb[0], nb[1], nb[2]] & inside_box
            nb_ghost = inside_box & ~nb_interior

            sel = np.nonzero(nb_interior)[0]
            rows.append(me[sel])
            cols.append(index[nb[0][sel], nb[1][sel], nb[2][sel]])
            vals.append(np.full(sel.size, inv_h2))
            diag[me[sel]] -= inv_h2

            sel = np.nonzero(nb_ghost)[0]
            if sel.size:
                if mode == "explicit":
                    source[me[sel]] += ghost_value[nb[0][sel], nb[1][sel],
                                                   nb[2][sel]] * inv_h2
                    diag[me[sel]] -= inv_h2
                else:
                    dg = d[nb[0][sel], nb[1][sel], nb[2][sel]]
                    di = d_here[sel]
                    wall = np.where(dg >= di, radius, -radius)
                    theta = np.clip((wall - di) / (dg - di), theta_min, 1.0)
                    bval = np.where(wall > 0, b_outer, b_inner)
                    diag[me[sel]] -= inv_h2 / theta
                    source[me[sel]] += bval * inv_h2 / theta
            # nodes on the truncation faces simply miss that neighbor,
            # which is the zero-flux closure described above

    A = sparse.csr_matrix(
        (np.concatenate(vals + [diag]),
         (np.concatenate(rows + [np.arange(n_int)]),
          np.concatenate(cols + [np.arange(n_int)]))),
        shape=(n_int, n_int))

    u = np.zeros(n_int)
    snaps = np.empty((len(times), n_int))
    step_count = 0
    ident = sparse.identity(n_int, format="csr")
    for idx, (t0, nsteps, local_dt) in enumerate(_segments(times, dt)):
        if mode == "explicit":
            lam = float(np.max(np.abs(A.diagonal())))
            cfl = min(h * h / 6.0, 1.8 / lam)
            if local_dt > cfl:
                sub = int(math.ceil(local_dt / cfl))
                nsteps, local_dt = nsteps * sub, local_dt / sub
            for _ in range(nsteps):
                u = u + local_dt * (A @ u + source)
        else:
            lu_be = splu((ident - local_dt * A).tocsc())
            lu_cn = splu((ident - 0.5 * local_dt * A).tocsc())
            for _ in range(nsteps):
                if step_count < 2:
                    u = lu_be.solve(u + local_dt * source)
                else:
                    u = lu_cn.solve(u + 0.5 * local_dt * (A @ u)
                                    + local_dt * source)
                step_count += 1
        snaps[idx] = u

    full = np.empty((len(times),) + shape)
    for i in range(len(times)):
        layer = ghost_value.copy()
        layer[interior] = snaps[i]
        full[i] = layer

    from scipy.interpolate import RegularGridInterpolator
    interps = [RegularGridInterpolator(axes, full[i]) for i in range(len(times))]

    def evaluate(point, t):
        i = _snapshot_index(times, t)
        val = float(interps[i](np.asarray(point, float)[None, :])[0])
        return val, 0.5 * h * max(abs(b_outer), abs(b_inner))

    def profile(points, t):
        i = _snapshot_index(times, t)
        pts = np.asarray(points, float)
        return interps[i](pts.reshape(-1, 3)).reshape(pts.shape[:-1])

    name = _wall_problem((b_outer, b_inner))
    fld = TemperatureField(evaluate=evaluate, provenance=f"grid3d-fd-{mode}",
                           problem=name, value_range=_RANGES.get(name, (None, None)),
                           times=times,
                           meta={"h": h, "dt": dt, "interior_nodes": n_int,
                                 "grid_shape": shape})
    fld.profile = profile
    return fld
