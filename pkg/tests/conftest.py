import numpy as np
import pytest


class RiggedSource:
    """Generator stand-in emitting a constant uniform value.

    value < 0.5 makes every `rng.random() < 0.5` draw succeed (all heads);
    value >= 0.5 makes every draw fail (all tails).
    """

    def __init__(self, value: float):
        self.value = value

    def random(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)


@pytest.fixture
def all_heads():
    return RiggedSource(0.0)


@pytest.fixture
def all_tails():
    return RiggedSource(0.99)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
