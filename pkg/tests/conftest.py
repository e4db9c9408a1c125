import numpy as np
import pytest
from hypothesis import strategies as st

from msc import InstanceMatrix

# three sequences of length 3 with a stated optimum of 150
EXAMPLE_ONE = [[120, 0, 80], [20, 40, 130], [0, 100, 0]]

# five sequences of length 7 used for the interval-system and ILP examples
EXAMPLE_TWO = [
    [20, 18, 20, 10, 16, 8, 10],
    [11, 6, 7, 17, 14, 14, 17],
    [14, 12, 18, 13, 11, 6, 12],
    [19, 8, 16, 18, 12, 19, 19],
    [16, 15, 11, 15, 6, 17, 11],
]

# the interval system paired with EXAMPLE_TWO, as 0-based (start rank, proper)
EXAMPLE_TWO_SYSTEM = ([1, 1, 1, 2, 2, 2, 2], [True, True, True, True, True, False, True])


@pytest.fixture
def example_one():
    return InstanceMatrix(EXAMPLE_ONE)


@pytest.fixture
def example_two():
    return InstanceMatrix(EXAMPLE_TWO)


@st.composite
def instances(draw, k=st.integers(1, 5), ell=st.integers(1, 5), value=st.integers(-6, 6)):
    k_, ell_ = draw(k), draw(ell)
    rows = draw(st.lists(st.lists(value, min_size=ell_, max_size=ell_), min_size=k_, max_size=k_))
    return InstanceMatrix(rows)


def five_rows(ell=st.integers(1, 5), value=st.integers(-6, 6)):
    return instances(k=st.just(5), ell=ell, value=value)


def rng_instance(rng, k, ell, bound):
    return InstanceMatrix(rng.integers(-bound, bound + 1, size=(k, ell)))


def rng(seed):
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(module.RESULTS):
            terminalreporter.write_line(module.RESULTS[number])
