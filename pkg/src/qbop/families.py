"""Feasible families and the window feasibility oracle.

Two families are provided. ``KnapsackFamily`` holds every subset whose weight
meets a demand; window feasibility reduces to a maximum weight independent
set on the conflict graph, solved here by branch and bound. ``SpanningTreeFamily``
holds edge sets of spanning trees; without conflicts a union-find
connectivity check answers the question.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .model import ViolationStructure, violation_structure


@dataclass(frozen=True)
class FeasibilityMode:
    """``ft1`` optimise then compare, ``ft2`` first-feasible stop,
    ``ft3`` first-feasible stop under a per-test wall-clock budget (seconds)."""

    kind: str = "ft2"
    budget: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("ft1", "ft2", "ft3"):
            raise ValueError(f"unknown feasibility mode {self.kind!r}")
        if self.kind == "ft3":
            if self.budget is None or self.budget <= 0:
                raise ValueError("ft3 needs a positive budget")
        elif self.budget is not None:
            raise ValueError(f"{self.kind} takes no budget")

    @classmethod
    def parse(cls, text: str) -> "FeasibilityMode":
        """Parse ``ft1``, ``ft2`` or ``ft3=<milliseconds>``."""
        text = text.strip().lower()
        if text.startswith("ft3"):
            _, _, ms = text.partition("=")
            if not ms:
                raise ValueError("ft3 needs a budget, e.g. ft3=10")
            return cls("ft3", float(ms) / 1000.0)
        return cls(text)

    @property
    def exact(self) -> bool:
        return self.kind != "ft3"

    def __str__(self) -> str:
        if self.kind == "ft3":
            return f"ft3={self.budget * 1000:g}"
        return self.kind


FT1 = FeasibilityMode("ft1")
FT2 = FeasibilityMode("ft2")


def FT3(budget_ms: float) -> FeasibilityMode:
    return FeasibilityMode("ft3", budget_ms / 1000.0)


class Answer(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class FeasibilityOutcome:
    answer: Answer
    witness: Optional[frozenset] = None
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.answer is Answer.FEASIBLE


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _deadline(mode: FeasibilityMode) -> Optional[float]:
    if mode.kind == "ft3":
        return time.monotonic() + mode.budget
    return None


# ---------------------------------------------------------------------------
# Knapsack family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KnapsackFamily:
    """Subsets S with ``sum(a[i] for i in S) >= b``."""

    a: tuple
    b: int

    kind = "knapsack"

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if any(x < 0 for x in a):
            raise ValueError("knapsack weights must be non-negative")
        if int(self.b) < 0:
            raise ValueError("knapsack demand must be non-negative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", int(self.b))

    @property
    def m(self) -> int:
        return len(self.a)

    def contains(self, subset) -> bool:
        return bool(subset) and sum(self.a[i] for i in subset) >= self.b

    def feasible(self, viol: ViolationStructure, mode: FeasibilityMode) -> FeasibilityOutcome:
        return knapsack_feasible(self, viol, mode)


def _pick_branch_vertex(cand: int, adj, a) -> tuple[int, int]:
    best_v, best_key = -1, None
    for v in _bits(cand):
        key = ((adj[v] & cand).bit_count(), a[v], -v)
        if best_key is None or key > best_key:
            best_v, best_key = v, key
    return best_v, best_key[0]


def knapsack_feasible(fam: KnapsackFamily, viol: ViolationStructure,
                      mode: FeasibilityMode) -> FeasibilityOutcome:
    """Decide whether some conflict-free subset reaches the demand.

    Depth-first branch and bound over the conflict graph. The branching
    vertex has the highest conflict degree among candidates (ties: larger
    weight, then lower index); the include branch is explored first. A node
    is pruned when its weight plus all candidate weight is below ``b`` or,
    in ``ft1``, does not beat the incumbent.
    """
    if viol.m != fam.m:
        raise ValueError("violation structure and family disagree on m")
    a, b, adj = fam.a, fam.b, viol.adjacency
    optimise = mode.kind == "ft1"
    deadline = _deadline(mode)

    best_weight, best_set = -1, 0
    nodes = 0
    stack = [(viol.allowed_mask, 0, 0)]
    while stack:
        if deadline is not None and time.monotonic() > deadline:
            return FeasibilityOutcome(Answer.UNKNOWN, nodes=nodes)
        cand, weight, chosen = stack.pop()
        nodes += 1
        bound = weight + sum(a[v] for v in _bits(cand))
        if bound < b or (optimise and bound <= best_weight):
            continue
        if cand:
            v, degree = _pick_branch_vertex(cand, adj, a)
            if degree == 0:
                # no conflicts left among candidates: take them all
                stack.append((0, bound, chosen | cand))
                continue
            bit = 1 << v
            stack.append((cand & ~bit, weight, chosen))
            stack.append((cand & ~bit & ~adj[v], weight + a[v], chosen | bit))
            continue
        if not chosen:
            continue
        if not optimise:
            return FeasibilityOutcome(Answer.FEASIBLE, frozenset(_bits(chosen)), nodes)
        if weight > best_weight:
            best_weight, best_set = weight, chosen

    if optimise and best_set and best_weight >= b:
        return FeasibilityOutcome(Answer.FEASIBLE, frozenset(_bits(best_set)), nodes)
    return FeasibilityOutcome(Answer.INFEASIBLE, nodes=nodes)


def max_weight_independent_set(fam: KnapsackFamily, viol: ViolationStructure) -> tuple[int, frozenset]:
    """Optimum of the conflict-constrained weight maximisation (b ignored)."""
    relaxed = KnapsackFamily(fam.a, 0)
    out = knapsack_feasible(relaxed, viol, FT1)
    if not out.feasible:
        return 0, frozenset()
    return sum(fam.a[i] for i in out.witness), out.witness


# ---------------------------------------------------------------------------
# Spanning-tree family
# ---------------------------------------------------------------------------

EXHAUSTIVE_TREE_NODES = 12


@dataclass(frozen=True)
class SpanningTreeFamily:
    """Edge-index sets forming a spanning tree of an undirected graph.

    Nodes are ``0..n-1``; element ``e`` of the ground set is ``edges[e]``.
    """

    n: int
    edges: tuple

    kind = "spanning_tree"

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError("graph needs at least one node")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a node outside [0, {n})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def contains(self, subset) -> bool:
        subset = list(subset)
        if len(subset) != self.n - 1 or len(set(subset)) != len(subset):
            return False
        dsu = DisjointSet(range(self.n))
        for e in subset:
            u, v = self.edges[e]
            if not dsu.merge(u, v):
                return False
        return self.n > 1 and dsu.n_subsets == 1

    def spanning_tree(self, allowed, order=None) -> Optional[frozenset]:
        """Any spanning tree using only ``allowed`` edges, or None.

        ``order`` fixes the scan order (Kruskal); defaults to edge index.
        """
        allowed = set(allowed)
        if self.n == 1:
            return None
        dsu = DisjointSet(range(self.n))
        tree = []
        for e in (order if order is not None else range(self.m)):
            if e not in allowed:
                continue
            u, v = self.edges[e]
            if dsu.merge(u, v):
                tree.append(e)
                if len(tree) == self.n - 1:
                    return frozenset(tree)
        return None

    def feasible(self, viol: ViolationStructure, mode: FeasibilityMode) -> FeasibilityOutcome:
        return tree_feasible(self, viol, mode)


def _conflict_free_tree(fam: SpanningTreeFamily, allowed: list, adj, deadline) -> FeasibilityOutcome:
    """Exhaustive include/exclude search for a conflict-free spanning tree."""
    target = fam.n - 1
    nodes = 0

    def components(chosen_edges):
        labels = list(range(fam.n))

        def find(x):
            while labels[x] != x:
                labels[x] = labels[labels[x]]
                x = labels[x]
            return x

        for e in chosen_edges:
            u, v = fam.edges[e]
            labels[find(u)] = find(v)
        return find

    # (position in allowed, chosen edges, chosen bitset)
    stack = [(0, (), 0)]
    while stack:
        if deadline is not None and time.monotonic() > deadline:
            return FeasibilityOutcome(Answer.UNKNOWN, nodes=nodes)
        pos, chosen, bits = stack.pop()
        nodes += 1
        if len(chosen) == target:
            return FeasibilityOutcome(Answer.FEASIBLE, frozenset(chosen), nodes)
        if len(chosen) + (len(allowed) - pos) < target:
            continue
        e = allowed[pos]
        stack.append((pos + 1, chosen, bits))
        if adj[e] & bits:
            continue
        find = components(chosen)
        u, v = fam.edges[e]
        if find(u) != find(v):
            stack.append((pos + 1, chosen + (e,), bits | (1 << e)))
    return FeasibilityOutcome(Answer.INFEASIBLE, nodes=nodes)


def tree_feasible(fam: SpanningTreeFamily, viol: ViolationStructure,
                  mode: FeasibilityMode) -> FeasibilityOutcome:
    """Spanning tree of unforbidden edges avoiding every conflict pair.

    Conflict-free windows use a connectivity test. With conflicts the
    problem is hard in general; graphs up to ``EXHAUSTIVE_TREE_NODES`` nodes
    are searched exhaustively and larger ones answer ``UNKNOWN``.
    """
    if viol.m != fam.m:
        raise ValueError("violation structure and family disagree on m")
    allowed = [e for e in range(fam.m) if e not in viol.forbidden]
    if not viol.has_conflicts():
        tree = fam.spanning_tree(allowed)
        if tree is None:
            return FeasibilityOutcome(Answer.INFEASIBLE, nodes=1)
        return FeasibilityOutcome(Answer.FEASIBLE, tree, nodes=1)
    if fam.spanning_tree(allowed) is None:
        return FeasibilityOutcome(Answer.INFEASIBLE, nodes=1)
    if fam.n > EXHAUSTIVE_TREE_NODES:
        return FeasibilityOutcome(Answer.UNKNOWN, nodes=1)
    return _conflict_free_tree(fam, allowed, viol.adjacency, _deadline(mode))


# ---------------------------------------------------------------------------
# Counting window oracle used by every solver
# ---------------------------------------------------------------------------


class WindowOracle:
    """Answers ``F(C, alpha, beta) != {}`` for one run and counts the calls."""

    def __init__(self, cost: np.ndarray, family, mode: FeasibilityMode):
        self.cost = cost
        self.family = family
        self.mode = mode
        self.tests = 0
        self.unknowns = 0

    def test(self, alpha, beta) -> FeasibilityOutcome:
        self.tests += 1
        viol = violation_structure(self.cost, alpha, beta)
        out = self.family.feasible(viol, self.mode)
        if out.answer is Answer.UNKNOWN:
            self.unknowns += 1
        return out
