import numpy as np
import pytest

from qbayes import effects


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=[2, 3, 4])
def dim(request):
    return request.param


@pytest.fixture
def sqm(dim):
    return effects.standard_sqm(dim)
