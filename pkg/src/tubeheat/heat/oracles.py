"""Reference temperature fields with flat or radial symmetry.

These are the solutions everything else is measured against: a flat
interface, a solid ball as initial data, and unit-temperature walls on a
ball seen from inside or outside.  All take time ``t`` and geometry in
absolute units; ``family`` distinguishes initial-data problems ("cauchy")
from unit-boundary-value problems ("ibvp"), whose flat-interface values
differ by exactly a factor of two.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .special import erf, erfc

_SQRT_PI = math.sqrt(math.pi)


def halfspace_oracle(depth, t, family="cauchy"):
    """Temperature at signed height ``depth`` above a flat interface.

    For ``family="cauchy"`` the initial data is the indicator of the half
    space below the interface and the solution is ``erfc(depth/(2 sqrt t))/2``;
    positive depth is the cold side.  For ``family="ibvp"`` the interface is
    a wall held at unit temperature with the domain above it (depth >= 0)
    starting cold, giving ``erfc(depth/(2 sqrt t))``.
    """
    depth = np.asarray(depth, float)
    if t <= 0:
        raise ValueError("time must be positive")
    s = depth / (2.0 * math.sqrt(t))
    if family == "cauchy":
        return 0.5 * erfc(s)
    if family == "ibvp":
        if np.any(depth < 0):
            raise ValueError("ibvp half-space oracle is defined for depth >= 0")
        return erfc(s)
    raise ValueError(f"unknown problem family {family!r}")


def _ball_mass_closed(r, a, t):
    # Gaussian mass of the ball |y| <= a seen from radius r, via
    #   u = (erf((a+r)/2vt) + erf((a-r)/2vt))/2
    #       - (vt/(r*sqrt(pi))) * exp(-(a-r)^2/4t) * (1 - exp(-a r / t))
    # where vt = sqrt(t); the last factor is written with expm1 so the
    # bracket never cancels, and r -> 0 falls back to the limit value.
    r = np.asarray(r, float)
    s = 2.0 * math.sqrt(t)
    front = 0.5 * (erf((a + r) / s) + erf((a - r) / s))
    safe_r = np.where(r > 0, r, 1.0)
    tail = (math.sqrt(t) / (safe_r * _SQRT_PI)) \
        * np.exp(-((a - r) ** 2) / (4.0 * t)) * (-np.expm1(-a * r / t))
    at_zero = erf(a / s) - (a / math.sqrt(math.pi * t)) \
        * math.exp(-a * a / (4.0 * t))
    return np.where(r > 1e-12 * (a + s), front - tail, at_zero)


def _ball_mass_quad(r, a, t):
    # same quantity by direct 1-D radial quadrature of the heat kernel
    def integrand(s, rr):
        return s * (math.exp(-((rr - s) ** 2) / (4.0 * t))
                    - math.exp(-((rr + s) ** 2) / (4.0 * t)))

    out = []
    for rr in np.atleast_1d(np.asarray(r, float)):
        if rr == 0.0:
            out.append(float(_ball_mass_closed(0.0, a, t)))
            continue
        val, _ = integrate.quad(integrand, 0.0, a, args=(rr,),
                                limit=200, epsabs=1e-14, epsrel=1e-12)
        out.append(val / (rr * math.sqrt(4.0 * math.pi * t)))
    out = np.array(out)
    return out.reshape(np.shape(r)) if np.ndim(r) else float(out[0])


def ball_radial_oracle(r, a, t, method="closed"):
    """Solution with initial data the indicator of the ball |y| <= a.

    Evaluated at distance ``r`` from the ball's center at time ``t``.  The
    closed form and the 1-D radial quadrature route compute the same
    integral; both are kept so each can check the other.
    """
    if a <= 0 or t <= 0:
        raise ValueError("ball radius and time must be positive")
    if method == "closed":
        out = _ball_mass_closed(r, a, t)
        return float(out) if np.ndim(r) == 0 else out
    if method == "quad":
        return _ball_mass_quad(r, a, t)
    raise ValueError(f"unknown method {method!r}")


def ball_wall_oracle(r, a, t, nterms=None):
    """Temperature inside a ball of radius ``a`` whose wall is held at 1.

    Separation of variables in the radial heat equation gives

        u(r, t) = 1 - (2a/(pi r)) * sum_n ((-1)^(n+1)/n)
                      sin(n pi r / a) exp(-(n pi / a)^2 t),

    with the r -> 0 limit filled in by continuity.  ``nterms`` defaults to
    enough terms that the truncated tail is below 1e-15.
    """
    if not 0 < t:
        raise ValueError("time must be positive")
    r = np.asarray(r, float)
    if np.any(r < 0) or np.any(r > a * (1 + 1e-12)):
        raise ValueError("radius outside the ball")
    if nterms is None:
        nterms = max(8, int(math.ceil((a / math.pi) * math.sqrt(40.0 / t))))
    n = np.arange(1, nterms + 1)
    decay = np.exp(-((n * math.pi / a) ** 2) * t) * ((-1.0) ** (n + 1)) / n
    rr = r[..., None]
    small = rr < 1e-9 * a
    safe = np.where(small, 1.0, rr)
    modes = np.where(small,
                     n * math.pi / a,
                     np.sin(n * math.pi * rr / a) / safe)
    v = (2.0 * a / math.pi) * np.sum(modes * decay, axis=-1)
    out = 1.0 - v
    return float(out) if out.ndim == 0 else out


def exterior_wall_oracle(r, a, t):
    """Temperature outside a ball of radius ``a`` whose wall is held at 1.

    The substitution w = r u reduces the exterior radial problem to heat
    flow on a half line, so u(r, t) = (a/r) erfc((r - a)/(2 sqrt t)).
    """
    r = np.asarray(r, float)
    if np.any(r < a * (1 - 1e-12)):
        raise ValueError("exterior oracle needs r >= a")
    out = (a / r) * erfc((r - a) / (2.0 * math.sqrt(t)))
    return float(out) if out.ndim == 0 else out
