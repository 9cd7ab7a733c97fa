import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from qbop.families import KnapsackFamily, SpanningTreeFamily
from qbop.model import Instance

T1_COST = [[0, 8, 3], [8, 1, 4], [3, 4, 2]]
T1_A = (4, 5, 6)
T1_B = 9

TRIANGLE = [(0, 1), (1, 2), (0, 2)]


@pytest.fixture
def t1():
    return Instance(T1_COST, KnapsackFamily(T1_A, T1_B))


@pytest.fixture
def triangle():
    return SpanningTreeFamily(3, TRIANGLE)


@st.composite
def cost_matrices(draw, min_m=1, max_m=6, max_value=20):
    m = draw(st.integers(min_m, max_m))
    flat = draw(st.lists(st.integers(0, max_value), min_size=m * m, max_size=m * m))
    return np.array(flat, dtype=np.int64).reshape(m, m)


@st.composite
def knapsack_instances(draw, min_m=1, max_m=7, max_value=20):
    cost = draw(cost_matrices(min_m, max_m, max_value))
    m = cost.shape[0]
    a = draw(st.lists(st.integers(0, 30), min_size=m, max_size=m))
    b = draw(st.integers(0, max(sum(a), 1) + 5))
    return Instance(cost, KnapsackFamily(a, b))


@st.composite
def connected_graphs(draw, max_n=5):
    """Random spanning path plus random extra edges, so always connected."""
    n = draw(st.integers(2, max_n))
    perm = draw(st.permutations(range(n)))
    edges = {tuple(sorted((perm[k], perm[k + 1]))) for k in range(n - 1)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs)))
    edges |= set(extra)
    edges = sorted(edges)
    order = draw(st.permutations(edges))
    return SpanningTreeFamily(n, list(order))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
