import math

import numpy as np
import pytest

from coins import random_konno_coin
from models import InitialCoinState

SQRT_HALF = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="session")
def tolerance():
    return 1e-12


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def random_coins(rng):
    def func(count, max_abs_b=0.9):
        return [random_konno_coin(rng, max_abs_b) for _ in range(count)]

    return func


@pytest.fixture
def symmetric_init():
    """R = 1/√2, L = i/√2."""
    return InitialCoinState(SQRT_HALF + 0j, 1j * SQRT_HALF)


@pytest.fixture
def upper_init():
    return InitialCoinState(1 + 0j, 0j)


@pytest.fixture
def real_equal_init():
    return InitialCoinState(SQRT_HALF + 0j, SQRT_HALF + 0j)
