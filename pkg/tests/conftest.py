from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st

from cqduality import build_pair, load_code
from cqduality.gf2core import BitMatrix, rank

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SUITE_CODES = ["rep:3", "even:3", "hamming:7,4", "e8"]
SUITE_THETAS = [0.0, math.pi / 6, math.pi / 3, 1.2, math.pi / 2]


@st.composite
def generators(draw, max_n: int = 12, min_n: int = 1) -> BitMatrix:
    """Full-rank k x n generator matrices, k anywhere in 0..n."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(0, n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=k, max_size=k))
    G = BitMatrix(k, n, tuple(rows))
    assume(rank(G) == k)
    return G


def thetas(n: int):
    return st.lists(st.floats(0.0, math.pi / 2), min_size=n, max_size=n)


@pytest.fixture(params=SUITE_CODES)
def suite_pair(request):
    return build_pair(load_code(request.param))


@pytest.fixture
def even3():
    return build_pair(load_code("even:3"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
