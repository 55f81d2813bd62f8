import pytest

from klcells.coxeter import coxeter_system
from klcells.grpring import WeightFunction
from klcells.hecke import HeckeAlgebra


def make(family, rank, weights="generic", m=None):
    W = coxeter_system(family, rank, m=m)
    if weights == "generic":
        L = WeightFunction.generic(W)
    elif weights == "equal":
        L = WeightFunction.equal(W)
    else:
        L = WeightFunction.asymptotic(W, *weights)
    return HeckeAlgebra(W, L)


_CACHE = {}


def algebra(family, rank, weights="generic", m=None):
    key = (family, rank, weights, m)
    if key not in _CACHE:
        _CACHE[key] = make(family, rank, weights, m)
    return _CACHE[key]


@pytest.fixture(scope="session")
def b2():
    return algebra("B", 2)


@pytest.fixture(scope="session")
def b2s():
    return algebra("B", 2, (1, 3))


@pytest.fixture(scope="session")
def b3():
    return algebra("B", 3)


@pytest.fixture(scope="session")
def b3s():
    return algebra("B", 3, (1, 3))


@pytest.fixture(scope="session")
def s3():
    return algebra("A", 2, "equal")


@pytest.fixture(scope="session")
def s4():
    return algebra("A", 3, "equal")
