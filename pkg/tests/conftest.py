from fractions import Fraction

import pytest
from hypothesis import settings

from hyperladder.families import make_family

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

HALF = Fraction(1, 2)


@pytest.fixture
def legendre():
    return make_family("jacobi", alpha=0, beta=0)


@pytest.fixture
def hermite():
    return make_family("hermite")


@pytest.fixture
def laguerre0():
    return make_family("laguerre", alpha=0)
