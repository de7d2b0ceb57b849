import random

import pytest

from shardlab import DEFAULT_MODULUS, PrimeField


@pytest.fixture(scope="session")
def gf7():
    return PrimeField(7)


@pytest.fixture(scope="session")
def gf97():
    return PrimeField(97)


@pytest.fixture(scope="session")
def field():
    return PrimeField(DEFAULT_MODULUS)


@pytest.fixture
def rng():
    return random.Random(0xC0DE)
