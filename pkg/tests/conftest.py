import math

import numpy as np
import pytest

from app.modules.measurement.service import clamp_audit

# Alpha grid used throughout: 0, 0.05 pi, ..., 0.45 pi, 0.49 pi.
ALPHA_GRID = [k * 0.05 * math.pi for k in range(10)] + [0.49 * math.pi]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_matrix(rng):
    """Factory for random complex 2x2 matrices with entries in the unit square."""
    def make(traceless: bool = False) -> np.ndarray:
        m = rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2))
        if traceless:
            m[1, 1] = -m[0, 0]
        return m

    return make


@pytest.fixture
def random_pt_points(rng):
    """10^3 seeded (s, alpha, t) triples inside the well-conditioned part of the domain."""
    n = 1000
    s = rng.uniform(0.2, 3.0, n) * rng.choice([-1.0, 1.0], n)
    alpha = rng.uniform(0.0, 0.45 * math.pi, n)
    t = rng.uniform(0.0, 5.0, n)
    return list(zip(s.tolist(), alpha.tolist(), t.tolist()))


@pytest.fixture(autouse=True)
def reset_clamp_audit():
    clamp_audit.clear()
    yield
    clamp_audit.clear()
