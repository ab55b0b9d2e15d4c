import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_full_dim_polytope(rng, dim, n_points=12, scale=1.0):
    """Hull of random points; full-dimensional with probability one."""
    from arithvol.convexcore import convex_hull
    pts = rng.uniform(-scale, scale, size=(n_points, dim))
    return convex_hull(pts)
