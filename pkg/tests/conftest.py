import random

import pytest

from liftlab.expr import VarId
from liftlab.geometry import Chart


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def xy():
    return VarId("x", 0), VarId("y", 1)


@pytest.fixture
def chart2():
    return Chart.make("x", "y")


@pytest.fixture
def chart3():
    return Chart.make("x", "y", "z")
