import random
from fractions import Fraction

import pytest

from graevnorm import validate_qpm


@pytest.fixture
def instance_a():
    """Two points with d(a, b) = 1/4 and d(b, a) = 1."""
    return validate_qpm(["a", "b"], [[0, Fraction(1, 4)], [1, 0]])


@pytest.fixture
def rng():
    return random.Random(20240817)
