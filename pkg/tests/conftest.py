import numpy as np
import pytest
from hypothesis import strategies as st

from pancakes.core import BurntStack, MixedStack, Orientation, UnburntStack

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@st.composite
def burnt_stacks(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    return BurntStack([p * s for p, s in zip(perm, signs)])


@st.composite
def unburnt_stacks(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    return UnburntStack(draw(st.permutations(range(1, n + 1))))


@st.composite
def mixed_stacks(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    ori = draw(st.lists(st.sampled_from(list(Orientation)), min_size=n, max_size=n))
    return MixedStack(list(zip(perm, ori)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
