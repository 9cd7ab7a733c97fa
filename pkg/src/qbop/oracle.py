"""Brute-force ground truth for small instances.

Knapsack instances are enumerated over all ``2^m`` subsets, spanning-tree
instances over all spanning trees by edge inclusion/exclusion. Hard size
guards refuse anything larger than ``MAX_KNAPSACK_M`` elements or
``MAX_TREE_N`` nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .families import KnapsackFamily, SpanningTreeFamily

MAX_KNAPSACK_M = 20
MAX_TREE_N = 8


class Objective(enum.Enum):
    BALANCED = "balanced"          # Z_max - Z_min over S x S
    QBP1 = "qbp1"                  # min Z_max
    QBP2 = "qbp2"                  # max Z_min
    LINEAR_BALANCED = "linear"     # max w - min w over S
    SUM_DECOMP = "sum"             # a-range + b-range
    PRODUCT_DECOMP = "product"     # maxA*maxB - minA*minB


class OracleRefused(RuntimeError):
    """The instance exceeds the enumeration size guard."""


@dataclass
class OracleReport:
    optimum: Optional[int]
    witnesses: list
    count: int


def feasible_subsets(family) -> Iterator[frozenset]:
    """Every member of the family, in a fixed order."""
    if isinstance(family, KnapsackFamily):
        if family.m > MAX_KNAPSACK_M:
            raise OracleRefused(f"knapsack enumeration limited to m <= {MAX_KNAPSACK_M}")
        yield from _knapsack_subsets(family)
    elif isinstance(family, SpanningTreeFamily):
        if family.n > MAX_TREE_N:
            raise OracleRefused(f"spanning-tree enumeration limited to n <= {MAX_TREE_N}")
        yield from spanning_trees(family)
    else:
        raise TypeError(f"no enumerator for {type(family).__name__}")


def _knapsack_subsets(fam: KnapsackFamily) -> Iterator[frozenset]:
    m, a, b = fam.m, fam.a, fam.b
    for mask in range(1, 1 << m):
        members = [i for i in range(m) if mask >> i & 1]
        if sum(a[i] for i in members) >= b:
            yield frozenset(members)


def spanning_trees(fam: SpanningTreeFamily) -> Iterator[frozenset]:
    """All spanning trees, by including or excluding each edge in turn.

    Branches are cut when an edge would close a cycle or when the remaining
    edges cannot finish the tree.
    """
    n, edges = fam.n, fam.edges
    if n < 2:
        return

    def comp_of(chosen):
        label = list(range(n))
        for e in chosen:
            u, v = edges[e]
            lu, lv = label[u], label[v]
            label = [lu if x == lv else x for x in label]
        return label

    def rec(pos, chosen):
        if len(chosen) == n - 1:
            yield frozenset(chosen)
            return
        if len(chosen) + (len(edges) - pos) < n - 1:
            return
        label = comp_of(chosen)
        u, v = edges[pos]
        if label[u] != label[v]:
            yield from rec(pos + 1, chosen + [pos])
        yield from rec(pos + 1, chosen)

    yield from rec(0, [])


def _knapsack_cost_scan(fam: KnapsackFamily, cost) -> Iterator[tuple]:
    """Depth-first subset scan carrying running Z_max / Z_min and weight.

    Yields ``(subset, zmax, zmin)`` for every feasible subset.
    """
    m, a, b = fam.m, fam.a, fam.b
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + a[i]

    def rec(pos, chosen, zmax, zmin, weight):
        if pos == m:
            if chosen and weight >= b:
                yield frozenset(chosen), zmax, zmin
            return
        if weight + suffix[pos] < b:
            return
        row = cost[pos]
        vals = [row[pos]]
        for j in chosen:
            vals.append(row[j])
            vals.append(cost[j][pos])
        hi, lo = max(vals), min(vals)
        if chosen:
            hi, lo = max(hi, zmax), min(lo, zmin)
        yield from rec(pos + 1, chosen + [pos], hi, lo, weight + a[pos])
        yield from rec(pos + 1, chosen, zmax, zmin, weight)

    yield from rec(0, [], None, None, 0)


def _value(objective: Objective, subset, cost, weights, a, b) -> int:
    idx = sorted(subset)
    if objective in (Objective.BALANCED, Objective.QBP1, Objective.QBP2):
        block = [cost[i][j] for i in idx for j in idx]
        if objective is Objective.BALANCED:
            return max(block) - min(block)
        return max(block) if objective is Objective.QBP1 else min(block)
    if objective is Objective.LINEAR_BALANCED:
        ws = [weights[i] for i in idx]
        return max(ws) - min(ws)
    av = [a[i] for i in idx]
    bv = [b[i] for i in idx]
    if objective is Objective.SUM_DECOMP:
        return max(av) - min(av) + max(bv) - min(bv)
    return max(av) * max(bv) - min(av) * min(bv)


def enumerate_optimum(family, objective: Objective, cost=None,
                      weights: Optional[Sequence] = None,
                      a: Optional[Sequence] = None, b: Optional[Sequence] = None) -> OracleReport:
    """Exact optimum of ``objective`` by complete enumeration of ``family``.

    QBP2 is a maximisation; every other objective is minimised.
    ``optimum`` is None when the family is empty.
    """
    objective = Objective(objective)
    cost_based = objective in (Objective.BALANCED, Objective.QBP1, Objective.QBP2)
    if cost_based:
        if cost is None:
            raise ValueError(f"{objective.value} needs a cost matrix")
        cost = np.asarray(cost).tolist()
    elif objective is Objective.LINEAR_BALANCED and weights is None:
        raise ValueError("linear objective needs element weights")
    elif objective in (Objective.SUM_DECOMP, Objective.PRODUCT_DECOMP) and (a is None or b is None):
        raise ValueError(f"{objective.value} needs vectors a and b")
    sign = -1 if objective is Objective.QBP2 else 1

    if cost_based and isinstance(family, KnapsackFamily):
        if family.m > MAX_KNAPSACK_M:
            raise OracleRefused(f"knapsack enumeration limited to m <= {MAX_KNAPSACK_M}")
        pick = {Objective.BALANCED: lambda hi, lo: hi - lo,
                Objective.QBP1: lambda hi, lo: hi,
                Objective.QBP2: lambda hi, lo: lo}[objective]
        scored = ((s, pick(hi, lo)) for s, hi, lo in _knapsack_cost_scan(family, cost))
    else:
        scored = ((s, _value(objective, s, cost, weights, a, b)) for s in feasible_subsets(family))

    best, witnesses, count = None, [], 0
    for subset, raw in scored:
        count += 1
        val = sign * raw
        if best is None or val < best:
            best, witnesses = val, [subset]
        elif val == best:
            witnesses.append(subset)
    return OracleReport(None if best is None else sign * best, witnesses, count)


def instance_optimum(instance, objective: Objective = Objective.BALANCED) -> OracleReport:
    return enumerate_optimum(instance.family, objective, cost=instance.cost)
