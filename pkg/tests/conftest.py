"""Shared fixtures and hypothesis strategies.

Admissible curvature pairs are pairs (k1 <= k2) together with a tube
half-width R such that R * max(|k1|, |k2|) < 1; every identity in the
invariants module is quantified over exactly that set.
"""

import numpy as np
import pytest
from hypothesis import strategies as st

from tubeheat.surfaces import CurvaturePair, make_surface

# Pair generator shared by the acceptance suite.  The seed is part of the
# contract: the sampled set is known to contain no pair within 1e-5 of
# umbilical, so equality tests on it are unambiguous.
PAIR_SEED = 20260819


def admissible_pair_arrays(n, seed=PAIR_SEED):
    rng = np.random.default_rng(seed)
    radius = rng.uniform(0.05, 2.0, size=n)
    cap = 0.95 / radius
    lo = rng.uniform(-cap, cap)
    hi = rng.uniform(-cap, cap)
    return np.minimum(lo, hi), np.maximum(lo, hi), radius


@st.composite
def admissible_pairs(draw):
    """(CurvaturePair, radius) with R * max|k| strictly below 1."""
    radius = draw(st.floats(0.05, 2.0, allow_nan=False))
    cap = 0.95 / radius
    a = draw(st.floats(-cap, cap, allow_nan=False))
    b = draw(st.floats(-cap, cap, allow_nan=False))
    return CurvaturePair(min(a, b), max(a, b)), radius


@pytest.fixture(scope="session")
def sphere_chart():
    return make_surface("sphere", rho=2.0)


@pytest.fixture(scope="session")
def plane_chart():
    return make_surface("plane")


@pytest.fixture(scope="session")
def cylinder_chart():
    return make_surface("cylinder", rho=2.0)


@pytest.fixture(scope="session")
def torus_chart():
    return make_surface("torus", a=1.0, b=3.0)


@pytest.fixture(scope="session")
def helicoid_chart():
    return make_surface("helicoid", pitch=1.0)
