import numpy as np
import pytest

import spirallax as sx


@pytest.fixture(scope="session")
def instances():
    """One lifted instance per admissible n, reused across tests."""
    out = {}
    for n in (5, 6, 8, 9):
        seed = sx.random_seed(n, rng_seed=17, twist=0.12)
        ls = sx.canonical_lift(seed)
        coords = sx.extract_coords(ls)
        out[n] = {
            "seed": seed,
            "lift": ls,
            "coords": coords,
            "derived": sx.derive(coords),
        }
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250810)


def random_convex_polygon(n, rng, z=1.0):
    """Strictly convex counterclockwise n-gon (homogeneous, z = 1)."""
    from spirallax.spiral import _perturbed_regular_polygon, is_strictly_convex

    for _ in range(64):
        pts = _perturbed_regular_polygon(n, rng)
        if is_strictly_convex(pts):
            return pts
    raise RuntimeError("no convex polygon found")
