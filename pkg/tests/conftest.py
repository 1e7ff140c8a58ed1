import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=2026))


@pytest.fixture
def rng_factory():
    def make(key):
        return np.random.Generator(np.random.Philox(key=key))
    return make
