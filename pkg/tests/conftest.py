import numpy as np
import pytest

from tntsim import HamiltonianSpec, SpinSystem


@pytest.fixture(scope="session")
def sys100():
    return SpinSystem(100)


@pytest.fixture(scope="session")
def ham100(sys100):
    return HamiltonianSpec(sys100, "tnt", 1.0, 2.0)


@pytest.fixture(scope="session")
def sys20():
    return SpinSystem(20)


@pytest.fixture(scope="session")
def ham20(sys20):
    return HamiltonianSpec(sys20, "tnt", 1.0, 2.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260822)
