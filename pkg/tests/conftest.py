import numpy as np
import pytest

from supercurves.grassmann import GrassmannScalar


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def gs(n, value=0):
    return GrassmannScalar.scalar(n, value)


def gen(n, i):
    return GrassmannScalar.generator(n, i)


def mono(n, idx, c=1.0):
    return GrassmannScalar.monomial(n, idx, c)


@pytest.fixture
def algebra():
    """Common 4-generator setup used across the matrix tests."""
    n = 4
    return n, [GrassmannScalar.generator(n, i) for i in range(n)]
