"""Polynomial cases for decomposable costs ``c_ij = a_i + b_j`` and
``c_ij = a_i * b_j``.

Both reduce to linear problems over the family restricted by an a-value
window ``alpha <= a_i <= beta``: a linear balanced problem on ``b`` for the
sum case, a bottleneck problem on ``b`` for the product case. Each candidate
upper-bounds the true objective of its own witness, and the optimum's exact
``(alpha, beta)`` pair attains it, so the cheapest witness over all pairs is
optimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .families import KnapsackFamily, SpanningTreeFamily
from .model import SolveResult, SolveStats, Status

KINDS = ("sum", "product")


@dataclass(frozen=True)
class DecomposableInstance:
    kind: str
    a: tuple
    b: tuple
    family: SpanningTreeFamily

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        a = tuple(int(x) for x in self.a)
        b = tuple(int(x) for x in self.b)
        if len(a) != self.family.m or len(b) != self.family.m:
            raise ValueError("a and b need one entry per element")
        if min(a + b, default=0) < 0:
            raise ValueError("a and b must be non-negative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return self.family.m

    def cost_matrix(self) -> np.ndarray:
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        return np.add.outer(a, b) if self.kind == "sum" else np.multiply.outer(a, b)

    def objective(self, subset) -> int:
        av = [self.a[i] for i in subset]
        bv = [self.b[i] for i in subset]
        if self.kind == "sum":
            return max(av) - min(av) + max(bv) - min(bv)
        return max(av) * max(bv) - min(av) * min(bv)


class _Counter:
    def __init__(self, family):
        self.family = family
        self.tests = 0

    def member(self, allowed) -> Optional[frozenset]:
        """Some family member using only ``allowed`` elements."""
        self.tests += 1
        fam = self.family
        if isinstance(fam, SpanningTreeFamily):
            return fam.spanning_tree(allowed)
        if isinstance(fam, KnapsackFamily):
            allowed = frozenset(allowed)
            return allowed if fam.contains(allowed) else None
        raise TypeError(f"unsupported family {type(fam).__name__}")


def _lbop(weights, counter: _Counter, ground: Iterable[int]):
    """Ascending double threshold over the distinct weights of ``ground``."""
    ground = list(ground)
    vals = sorted({weights[i] for i in ground})
    best, best_obj = None, None
    l = u = 0
    while l < len(vals) and u < len(vals):
        lo, hi = vals[l], vals[u]
        found = counter.member([i for i in ground if lo <= weights[i] <= hi])
        if found is None:
            u += 1
            continue
        ws = [weights[i] for i in found]
        obj = max(ws) - min(ws)
        if best_obj is None or obj < best_obj:
            best, best_obj = found, obj
            if obj == 0:
                break
        l = vals.index(min(ws)) + 1
        u = max(u, l)
    return best, best_obj


def _result(best, obj, t0, tests, iterations) -> SolveResult:
    stats = SolveStats(tests=tests, iterations=iterations, elapsed=time.perf_counter() - t0)
    if best is None:
        return SolveResult(None, None, Status.INFEASIBLE, stats)
    return SolveResult(best, obj, Status.OPTIMAL, stats)


def solve_lbop(weights, family, allowed: Optional[Iterable[int]] = None) -> SolveResult:
    """Minimise ``max w - min w`` over family members (optionally restricted
    to ``allowed`` elements) with the double threshold method."""
    t0 = time.perf_counter()
    counter = _Counter(family)
    ground = range(family.m) if allowed is None else allowed
    best, obj = _lbop(weights, counter, ground)
    return _result(best, obj, t0, counter.tests, counter.tests)


def _a_windows(a):
    vals = sorted(set(a))
    for i, alpha in enumerate(vals):
        for beta in vals[i:]:
            yield alpha, beta


def solve_qbop_sum(inst: DecomposableInstance) -> SolveResult:
    """Exact minimum of a-range plus b-range over the family."""
    if inst.kind != "sum":
        raise ValueError("solve_qbop_sum needs a 'sum' instance")
    t0 = time.perf_counter()
    counter = _Counter(inst.family)
    a, b = inst.a, inst.b
    best, best_obj, candidates = None, None, 0
    for alpha, beta in _a_windows(a):
        if best_obj is not None and beta - alpha >= best_obj:
            continue
        ground = [i for i in range(inst.m) if alpha <= a[i] <= beta]
        if counter.member(ground) is None:
            continue
        candidates += 1
        tree, _ = _lbop(b, counter, ground)
        obj = inst.objective(tree)
        if best_obj is None or obj < best_obj:
            best, best_obj = tree, obj
    return _result(best, best_obj, t0, counter.tests, candidates)


def _bottleneck(b, counter: _Counter, ground: list):
    """Minimise ``max b_i`` over members inside ``ground`` by binary search
    on the b-threshold."""
    vals = sorted({b[i] for i in ground})
    lo, hi = 0, len(vals) - 1
    best = counter.member(ground)
    if best is None:
        return None, None
    hi = vals.index(max(b[i] for i in best))
    while lo < hi:
        mid = (lo + hi) // 2
        found = counter.member([i for i in ground if b[i] <= vals[mid]])
        if found is None:
            lo = mid + 1
        else:
            best = found
            hi = vals.index(max(b[i] for i in found))
    return best, vals[hi]


def solve_qbop_product(inst: DecomposableInstance) -> SolveResult:
    """Exact minimum of ``maxA*maxB - minA*minB`` over the family."""
    if inst.kind != "product":
        raise ValueError("solve_qbop_product needs a 'product' instance")
    t0 = time.perf_counter()
    counter = _Counter(inst.family)
    a, b = inst.a, inst.b
    best, best_obj, candidates = None, None, 0
    for alpha, beta in _a_windows(a):
        q = [i for i in range(inst.m) if alpha <= a[i] <= beta]
        if counter.member(q) is None:
            continue
        for gamma in sorted({b[i] for i in q}):
            ground = [i for i in q if b[i] >= gamma]
            tree, top = _bottleneck(b, counter, ground)
            if tree is None:
                break  # larger gamma only shrinks the ground set
            candidates += 1
            if best_obj is not None and beta * top - alpha * gamma >= best_obj:
                continue
            obj = inst.objective(tree)
            if best_obj is None or obj < best_obj:
                best, best_obj = tree, obj
    return _result(best, best_obj, t0, counter.tests, candidates)


def solve_decomposable(inst: DecomposableInstance) -> SolveResult:
    return solve_qbop_sum(inst) if inst.kind == "sum" else solve_qbop_product(inst)
