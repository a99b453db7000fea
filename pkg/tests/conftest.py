import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from archmon.core import ordered
from archmon.gen import build, chain, cyclic, random_monoid, semilattice, trivial, truncated

settings.register_profile(
    "archmon", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("archmon")


def pair(x1, x2, n2=4):
    """Index of (x1, x2) in a direct sum whose second factor has n2 elements."""
    return x1 * n2 + x2


@pytest.fixture
def T3():
    return ordered(truncated(3))


@pytest.fixture
def Z2():
    return ordered(cyclic(2))


@pytest.fixture
def D33():
    return ordered(build("dsum(trunc(3),trunc(3))"))


@pytest.fixture
def B2():
    return ordered(truncated(1))


@pytest.fixture
def C3():
    return ordered(chain(3))


@pytest.fixture
def diamond():
    # bottom 0, atoms 1 and 2, top 3
    return ordered(semilattice(4, [(0, 1), (0, 2), (1, 3), (2, 3)], "diamond"))


@pytest.fixture
def one():
    return ordered(trivial())


seeds = st.integers(min_value=0, max_value=10_000)


@st.composite
def monoids(draw, hint=5):
    """Small monoids from seeded random recipes, with the derived order."""
    return ordered(random_monoid(draw(seeds), hint))


@st.composite
def monoid_and_subset(draw, hint=5):
    O = draw(monoids(hint))
    mask = draw(st.lists(st.booleans(), min_size=O.n, max_size=O.n))
    return O, frozenset(int(i) for i in np.flatnonzero(mask))
