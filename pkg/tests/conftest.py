import random

import pytest
from hypothesis import settings

from nakajima.kan import KanContext
from nakajima.linalg import GF
from nakajima.quiver import AutoSpec, Configuration, DynkinQuiver, ZVertex

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


@pytest.fixture(scope="session")
def a2():
    return KanContext.build(DynkinQuiver.parse("A2"), max_degree=10)


@pytest.fixture(scope="session")
def a3():
    return KanContext.build(DynkinQuiver.parse("A3"), max_degree=8)


@pytest.fixture(scope="session")
def a2_f2():
    return KanContext.build(DynkinQuiver.parse("A2"), field=GF(2), max_degree=10)


@pytest.fixture(scope="session")
def a2_cluster():
    return KanContext.build(DynkinQuiver.parse("A2"), auto=AutoSpec.cluster(), max_degree=8)


@pytest.fixture(scope="session")
def truncated_poly():
    """S = k[x]/x^3 over F_2: A2, F = tau, C the orbit of (1,0)."""
    return KanContext.build(DynkinQuiver.parse("A2"), config=Configuration((ZVertex(1, 0),)),
                            field=GF(2), max_degree=10)


@pytest.fixture
def rng():
    return random.Random(0)
