import numpy as np
import pytest

from mprkfv.models import IdealGas, ReactiveMixture


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_single_states(rng, n):
    """Random EoS-valid single-species conservative states, component-first."""
    rho = rng.uniform(0.1, 10.0, n)
    u = rng.uniform(-3.0, 3.0, n)
    p = rng.uniform(0.1, 10.0, n)
    return IdealGas().prim_to_cons(np.stack([rho, u, p]))


def random_multi_states(rng, n, mixture=None):
    mixture = mixture or ReactiveMixture()
    r1 = rng.uniform(1e-5, 1e-3, n)
    r2 = rng.uniform(1e-5, 1e-3, n)
    r3 = rng.uniform(1e-5, 1e-3, n)
    u = rng.uniform(-50.0, 50.0, n)
    p = rng.uniform(1.0, 1e3, n)
    return mixture.prim_to_cons(np.stack([r1, r2, r3, u, p]))
