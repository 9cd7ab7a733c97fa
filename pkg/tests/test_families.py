import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbop.families import (FT1, FT2, FT3, Answer, FeasibilityMode, KnapsackFamily,
                           SpanningTreeFamily, WindowOracle, knapsack_feasible,
                           max_weight_independent_set, tree_feasible)
from qbop.model import ViolationStructure, as_cost_matrix, violation_structure
from qbop.oracle import spanning_trees

from conftest import T1_A, T1_B, T1_COST, TRIANGLE, connected_graphs, cost_matrices


def brute_knapsack(fam, viol):
    """Feasible, conflict-free subsets by exhaustive enumeration."""
    out = []
    for r in range(1, fam.m + 1):
        for s in itertools.combinations(range(fam.m), r):
            if fam.contains(s) and viol.admits(s):
                out.append(frozenset(s))
    return out


def no_violations(m):
    return ViolationStructure(m, frozenset(), (0,) * m)


def test_mode_parse():
    assert FeasibilityMode.parse("ft1") == FT1
    assert FeasibilityMode.parse("FT2") == FT2
    assert FeasibilityMode.parse("ft3=10") == FT3(10)
    assert str(FT3(10)) == "ft3=10"
    assert not FT3(1).exact and FT1.exact
    for bad in ("ft4", "ft3", "ft3=0", "ft3=-1"):
        with pytest.raises(ValueError):
            FeasibilityMode.parse(bad)


def test_knapsack_t1_examples():
    fam = KnapsackFamily(T1_A, T1_B)
    c = as_cost_matrix(T1_COST)
    out = knapsack_feasible(fam, violation_structure(c, 1, 4), FT2)
    assert out.answer is Answer.FEASIBLE and out.witness == {1, 2}
    out = knapsack_feasible(fam, violation_structure(c, 0, 3), FT2)
    assert out.answer is Answer.FEASIBLE and out.witness == {0, 2}


def test_knapsack_everything_forbidden():
    fam = KnapsackFamily(T1_A, 0)
    viol = ViolationStructure(3, frozenset({0, 1, 2}), (0, 0, 0))
    for mode in (FT1, FT2, FT3(50)):
        assert knapsack_feasible(fam, viol, mode).answer is Answer.INFEASIBLE


def test_zero_demand_gives_nonempty_witness():
    fam = KnapsackFamily((0, 0), 0)
    out = knapsack_feasible(fam, no_violations(2), FT2)
    assert out.feasible and out.witness


def test_knapsack_rejects_bad_input():
    with pytest.raises(ValueError):
        KnapsackFamily((1, -2), 1)
    with pytest.raises(ValueError):
        KnapsackFamily((1, 2), -1)


@settings(max_examples=200)
@given(cost_matrices(max_m=7), st.data())
def test_knapsack_matches_enumeration(cost, data):
    m = cost.shape[0]
    a = data.draw(st.lists(st.integers(0, 20), min_size=m, max_size=m))
    b = data.draw(st.integers(0, sum(a) + 3))
    fam = KnapsackFamily(a, b)
    vals = sorted(set(cost.ravel().tolist()))
    lo = data.draw(st.integers(0, len(vals) - 1))
    hi = data.draw(st.integers(lo, len(vals) - 1))
    viol = violation_structure(cost, vals[lo], vals[hi])
    expected = brute_knapsack(fam, viol)
    for mode in (FT1, FT2):
        out = knapsack_feasible(fam, viol, mode)
        assert out.feasible == bool(expected)
        if out.feasible:
            assert fam.contains(out.witness) and viol.admits(out.witness)
    best, witness = max_weight_independent_set(fam, viol)
    free = [frozenset(s) for r in range(1, m + 1) for s in itertools.combinations(range(m), r)
            if viol.admits(s)]
    assert best == max((sum(a[i] for i in s) for s in free), default=0)


def test_ft3_expired_budget_is_unknown_or_exact():
    # a dense conflict graph with an unreachable demand; a tiny budget must
    # either finish with the exact answer or report UNKNOWN, never a wrong one
    rng = np.random.default_rng(0)
    m = 40
    cost = rng.integers(0, 100, size=(m, m))
    fam = KnapsackFamily([1] * m, m)
    viol = violation_structure(as_cost_matrix(cost), 20, 80)
    out = knapsack_feasible(fam, viol, FT3(0.001))
    assert out.answer in (Answer.UNKNOWN, Answer.INFEASIBLE)


def test_tree_examples(triangle):
    assert tree_feasible(triangle, no_violations(3), FT2).witness in {
        frozenset(s) for s in itertools.combinations(range(3), 2)}
    only_first = ViolationStructure(3, frozenset({1, 2}), (0, 0, 0))
    assert tree_feasible(triangle, only_first, FT2).answer is Answer.INFEASIBLE
    path = SpanningTreeFamily(2, [(0, 1)])
    out = tree_feasible(path, no_violations(1), FT2)
    assert out.feasible and out.witness == {0}


def test_tree_family_validation():
    with pytest.raises(ValueError):
        SpanningTreeFamily(3, [(0, 0)])
    with pytest.raises(ValueError):
        SpanningTreeFamily(3, [(0, 3)])
    fam = SpanningTreeFamily(3, TRIANGLE)
    assert fam.contains({0, 1}) and not fam.contains({0}) and not fam.contains({0, 1, 2})


@settings(max_examples=150)
@given(connected_graphs(max_n=5), st.data())
def test_tree_matches_enumeration(fam, data):
    m = fam.m
    flat = data.draw(st.lists(st.integers(0, 6), min_size=m * m, max_size=m * m))
    cost = as_cost_matrix(np.array(flat).reshape(m, m))
    vals = sorted(set(flat))
    lo = data.draw(st.integers(0, len(vals) - 1))
    hi = data.draw(st.integers(lo, len(vals) - 1))
    viol = violation_structure(cost, vals[lo], vals[hi])
    expected = any(viol.admits(t) for t in spanning_trees(fam))
    out = tree_feasible(fam, viol, FT2)
    assert out.feasible == expected
    if out.feasible:
        assert fam.contains(out.witness) and viol.admits(out.witness)


def test_large_tree_with_conflicts_reports_unknown():
    n = 14
    fam = SpanningTreeFamily(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    m = fam.m
    cost = np.zeros((m, m), dtype=np.int64)
    cost[0, 1] = cost[1, 0] = 5
    viol = violation_structure(as_cost_matrix(cost), 0, 1)
    assert tree_feasible(fam, viol, FT2).answer is Answer.UNKNOWN


def test_window_oracle_counts():
    c = as_cost_matrix(T1_COST)
    oracle = WindowOracle(c, KnapsackFamily(T1_A, T1_B), FT2)
    oracle.test(0, 8)
    oracle.test(2, 2)
    assert oracle.tests == 2 and oracle.unknowns == 0
