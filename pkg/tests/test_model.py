import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbop.model import (Instance, ThresholdWindow, ValueLadder, as_cost_matrix, as_subset,
                        evaluate, violation_structure)
from qbop.families import KnapsackFamily

from conftest import T1_COST, cost_matrices


def naive_eval(cost, s):
    vals = [cost[i][j] for i in s for j in s]
    return max(vals), min(vals), max(vals) - min(vals)


def test_evaluate_t1():
    c = as_cost_matrix(T1_COST)
    assert evaluate(c, {0, 2}) == (3, 0, 3)
    assert evaluate(c, {0, 1, 2}) == (8, 0, 8)


@given(cost_matrices(), st.data())
def test_singleton_has_zero_range(cost, data):
    i = data.draw(st.integers(0, cost.shape[0] - 1))
    assert evaluate(cost, {i}) == (cost[i, i], cost[i, i], 0)


@settings(max_examples=300)
@given(cost_matrices(), st.data())
def test_evaluate_matches_double_loop(cost, data):
    m = cost.shape[0]
    s = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    got = evaluate(cost, s)
    assert got == naive_eval(cost.tolist(), s)
    assert got[2] >= 0
    assert (got[2] == 0) == (len({cost[i, j] for i in s for j in s}) == 1)


def test_cost_matrix_validation():
    with pytest.raises(ValueError):
        as_cost_matrix([[1, 2, 3]])
    with pytest.raises(ValueError):
        as_cost_matrix([[-1]])
    c = as_cost_matrix([[1]])
    with pytest.raises(ValueError):
        c[0, 0] = 3


def test_subset_validation():
    with pytest.raises(ValueError):
        as_subset([], 3)
    with pytest.raises(ValueError):
        as_subset([3], 3)
    assert as_subset([2, 0], 3) == frozenset({0, 2})


def test_ladder():
    lad = ValueLadder.from_cost(as_cost_matrix(T1_COST))
    assert tuple(lad) == (0, 1, 2, 3, 4, 8)
    assert len(lad) == 6
    assert lad.rank(4) == 4
    assert lad.first_above(3) == 4
    assert lad.last_below(3) == 2
    assert tuple(ValueLadder.from_cost(np.full((3, 3), 7))) == (7,)


@given(cost_matrices(max_m=8))
def test_ladder_bounded_by_entries(cost):
    lad = ValueLadder.from_cost(cost)
    assert len(lad) <= cost.size
    assert list(lad) == sorted(set(cost.ravel().tolist()))


def test_violation_examples():
    c = as_cost_matrix(T1_COST)
    v = violation_structure(c, 1, 4)
    assert v.forbidden == {0}
    assert not v.has_conflicts()
    v = violation_structure(c, 0, 8)
    assert not v.forbidden and not v.conflicts
    v = violation_structure(c, 0, 3)
    assert not v.forbidden
    assert v.conflicts == {(0, 1), (1, 2)}


def test_window_rejects_inverted():
    with pytest.raises(ValueError):
        ThresholdWindow(4, 1)


def _blocked(v):
    return v.conflicts | {(i, j) for i in range(v.m) for j in range(i + 1, v.m)
                          if i in v.forbidden or j in v.forbidden}


@given(cost_matrices(max_m=6), st.data())
def test_violation_monotone(cost, data):
    lad = list(ValueLadder.from_cost(cost))
    i = data.draw(st.integers(0, len(lad) - 1))
    j = data.draw(st.integers(i, len(lad) - 1))
    i2 = data.draw(st.integers(i, j))
    j2 = data.draw(st.integers(i2, j))
    wide = violation_structure(cost, lad[i], lad[j])
    narrow = violation_structure(cost, lad[i2], lad[j2])
    assert wide.forbidden <= narrow.forbidden
    # conflicts are only listed between unforbidden elements, so compare the
    # set of pairs that cannot be chosen together
    assert _blocked(wide) <= _blocked(narrow)
    full = violation_structure(cost, lad[0], lad[-1])
    assert not full.forbidden and not full.has_conflicts()


@given(cost_matrices(max_m=5), st.data())
def test_admits_matches_window(cost, data):
    m = cost.shape[0]
    lad = list(ValueLadder.from_cost(cost))
    i = data.draw(st.integers(0, len(lad) - 1))
    j = data.draw(st.integers(i, len(lad) - 1))
    s = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    v = violation_structure(cost, lad[i], lad[j])
    inside = all(lad[i] <= cost[p, q] <= lad[j] for p in s for q in s)
    assert v.admits(s) == inside


def test_instance_checks_family_size():
    with pytest.raises(ValueError):
        Instance(T1_COST, KnapsackFamily((1, 2), 1))
