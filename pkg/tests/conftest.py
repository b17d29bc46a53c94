import pytest
from mpmath import mp

from fh_gauss.cauchy import aux_quantities
from fh_gauss.orthopoly import build_system
from fh_gauss.weight import WeightSpec

N1 = ((0.5,), (1,))
N2 = ((-0.6, 0.8), (0.5, 1.5))
PV = ((-0.6, 0.8), (-0.5, 1.5))
GAUSS = ((0.0,), (0,))
EVEN = ((-0.4, 0.7), (2, 4))


@pytest.fixture(autouse=True)
def _precision():
    with mp.workprec(256):
        yield


def _system(ts, gammas, n_max):
    spec = WeightSpec(ts, gammas)
    sys = build_system(spec, n_max)
    return spec, sys, aux_quantities(sys)


@pytest.fixture(scope="session")
def n1():
    return _system(*N1, 12)


@pytest.fixture(scope="session")
def n2():
    return _system(*N2, 12)


@pytest.fixture(scope="session")
def pv():
    return _system(*PV, 12)


@pytest.fixture(scope="session")
def gauss():
    return _system(*GAUSS, 12)
