import numpy as np
import pytest

from gyrator.core import ComplexField


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def random_field(rng, n1, n2=None, dx=0.3, dy=0.25):
    n2 = n1 if n2 is None else n2
    data = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
    return ComplexField(data, dx, dy)
