import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mixedfca.context import FormalContext, MixedSet, read_context
from mixedfca.tuner import load_problem

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def alloys():
    return read_context(DATA / "alloys.csv")


@pytest.fixture
def small_problem():
    return load_problem(DATA / "small_problem.json")


def random_context(rng, max_objects, max_attributes, min_attributes=1):
    g = int(rng.integers(0, max_objects + 1))
    m = int(rng.integers(min_attributes, max_attributes + 1))
    density = rng.uniform(0.1, 0.9)
    incidence = rng.random((g, m)) < density
    return FormalContext([f"g{i}" for i in range(g)], [f"m{j}" for j in range(m)], incidence)


def all_consistent(n):
    """Every consistent mixed set over n attributes (3^n of them)."""
    for signs in itertools.product((0, 1, 2), repeat=n):
        yield MixedSet(
            sum(1 << i for i, s in enumerate(signs) if s == 1),
            sum(1 << i for i, s in enumerate(signs) if s == 2),
        )


@st.composite
def contexts(draw, max_objects=5, max_attributes=5):
    g = draw(st.integers(0, max_objects))
    m = draw(st.integers(1, max_attributes))
    cells = draw(st.lists(st.booleans(), min_size=g * m, max_size=g * m))
    return FormalContext(
        [f"g{i}" for i in range(g)],
        [f"m{j}" for j in range(m)],
        np.array(cells, dtype=bool).reshape(g, m),
    )


@st.composite
def mixed_sets(draw, n, consistent=False):
    signs = draw(st.lists(st.integers(0, 3 if not consistent else 2), min_size=n, max_size=n))
    pos = sum(1 << i for i, s in enumerate(signs) if s in (1, 3))
    neg = sum(1 << i for i, s in enumerate(signs) if s in (2, 3))
    return MixedSet(pos, neg)
