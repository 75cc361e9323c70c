import numpy as np
import pytest

from src.expr import builtin
from src.grid import BoxDomain


@pytest.fixture
def quadratic():
    return builtin('quadratic')


@pytest.fixture
def square3():
    return BoxDomain.cube(-3.0, 3.0, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
