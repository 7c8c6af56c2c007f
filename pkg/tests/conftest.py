import random

import pytest
from hypothesis import strategies as st

from descent_kit.categories import Tag
from descent_kit.generator import random_morphism, random_preorder

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@st.composite
def morphisms(draw, tag=None, max_x=3, max_b=4, max_e=4):
    """Random valid morphisms, driven by a drawn seed through the package generator."""
    tag = Tag(tag) if tag is not None else draw(st.sampled_from(list(Tag)))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    X = random_preorder(rng, rng.randint(1, max_x), 0.4, 0.15)
    return random_morphism(rng, tag, X, rng.randint(1, max_b), rng.randint(0, max_e),
                           rng.uniform(0.2, 0.7), rng.uniform(0.0, 0.3), rng.uniform(0.2, 0.8))


@pytest.fixture
def rng():
    return random.Random(20260101)
