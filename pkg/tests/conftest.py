import numpy as np
import pytest

import onefifth as of

GAMMA = float(np.exp(1.0 / 3.0))
Q = 4.0


@pytest.fixture(scope="session")
def sphere_params():
    return of.AlgoParams(20, GAMMA, Q)


@pytest.fixture(scope="session")
def sphere_fn():
    return of.ObjectiveFunction(of.sphere(20))


@pytest.fixture(scope="session")
def sphere_chain(sphere_params, sphere_fn):
    """One long normalized-chain run on the sphere, shared by several tests."""
    return of.run_chain(sphere_params, sphere_fn, np.ones(20), 10**6, seed=77)
