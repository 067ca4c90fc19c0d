import numpy as np
import pytest

from parrondo_ring import ParamVector


def random_params(rng, symmetric=False, lo=0.02, hi=0.98) -> ParamVector:
    p = rng.uniform(lo, hi, size=4)
    if symmetric:
        p[2] = p[1]
    return ParamVector(*map(float, p))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
