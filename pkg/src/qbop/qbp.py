"""Quadratic bottleneck subproblems by binary search on the value ladder.

``solve_qbp1`` minimises Z_max and ``solve_qbp2`` maximises Z_min. Both work
on a :class:`MaskedMatrix`: a window ``[lower, upper]`` of the base matrix
whose outside entries count as ``+M`` for QBP1 and ``-M`` for QBP2. The base
matrix is never modified; a masked entry simply widens the feasibility
window it would need.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .families import Answer, FeasibilityMode, WindowOracle
from .model import SolveResult, SolveStats, Status, ValueLadder, evaluate


@dataclass(frozen=True)
class MaskedMatrix:
    base: np.ndarray
    ladder: ValueLadder
    lower: Optional[int] = None   # entries < lower are masked
    upper: Optional[int] = None   # entries > upper are masked

    @property
    def big_m(self) -> int:
        return 1 + self.ladder[-1]

    def window(self) -> Optional[tuple[int, int]]:
        """Ladder index range left unmasked, or None if it is empty."""
        lo = 0 if self.lower is None else self.ladder.first_above(self.lower - 1)
        hi = len(self.ladder) - 1 if self.upper is None else self.ladder.last_below(self.upper + 1)
        if lo > hi:
            return None
        return lo, hi

    def is_full(self) -> bool:
        return self.window() == (0, len(self.ladder) - 1)

    def entry(self, value: int, sense: int) -> int:
        """Masked view of one base entry; ``sense`` +1 for QBP1, -1 for QBP2."""
        if (self.lower is not None and value < self.lower) or (
                self.upper is not None and value > self.upper):
            return sense * self.big_m
        return value


@dataclass
class QBPResult:
    """Outcome of one bottleneck solve.

    ``value`` is the masked optimum: ``M`` (QBP1) or ``-M`` (QBP2) when every
    feasible set touches a masked entry, None when the family is empty.
    ``bound`` is the relaxed bound for an early-stopped search (equal to
    ``value`` for an exact one).
    """

    solution: Optional[frozenset]
    value: Optional[int]
    status: Status
    tests: int = 0
    bound: Optional[int] = None
    masked: bool = False


def _masked_fallback(cm: MaskedMatrix, oracle: WindowOracle, family_nonempty: bool,
                     sense: int, start: int, poisoned: bool) -> QBPResult:
    """The masked window is empty: tell a fully masked optimum from an empty family."""
    witness = None
    if not family_nonempty:
        if cm.is_full():
            return QBPResult(None, None, Status.INFEASIBLE, oracle.tests - start)
        out = oracle.test(cm.ladder[0], cm.ladder[-1])
        poisoned |= out.answer is Answer.UNKNOWN
        if not out.feasible:
            return QBPResult(None, None, Status.INFEASIBLE, oracle.tests - start)
        witness = out.witness
    value = sense * cm.big_m
    return QBPResult(witness, value, Status.HEURISTIC if poisoned else Status.OPTIMAL,
                     oracle.tests - start, bound=value, masked=True)


def qbp1_search(cm: MaskedMatrix, oracle: WindowOracle, family_nonempty: bool = False,
                gap: int = 1) -> QBPResult:
    """Minimise Z_max over the family inside the masked window.

    Invariant: ladder index ``lo_b`` is a lower bound on the optimum index and
    ``hi_b`` is attained by the cached witness. The search stops once
    ``hi_b - lo_b < gap``; ``gap=1`` is exact.
    """
    ladder = cm.ladder
    start = oracle.tests
    win = cm.window()
    if win is None:
        return _masked_fallback(cm, oracle, family_nonempty, +1, start, False)
    lo, hi = win
    alpha = ladder[lo]
    out = oracle.test(alpha, ladder[hi])
    poisoned = out.answer is Answer.UNKNOWN
    if not out.feasible:
        return _masked_fallback(cm, oracle, family_nonempty, +1, start, poisoned)
    best = out.witness
    zmax, _, _ = evaluate(cm.base, best)
    lo_b, hi_b = lo, ladder.rank(zmax)
    while hi_b - lo_b >= gap:
        mid = (lo_b + hi_b) // 2
        out = oracle.test(alpha, ladder[mid])
        if out.answer is Answer.UNKNOWN:
            poisoned = True
        if out.feasible:
            best = out.witness
            hi_b = ladder.rank(evaluate(cm.base, best)[0])
        else:
            lo_b = mid + 1
    status = Status.HEURISTIC if poisoned else Status.OPTIMAL
    return QBPResult(best, ladder[hi_b], status, oracle.tests - start, bound=ladder[lo_b])


def qbp2_search(cm: MaskedMatrix, oracle: WindowOracle, family_nonempty: bool = False,
                gap: int = 1) -> QBPResult:
    """Maximise Z_min over the family inside the masked window (mirror of QBP1).

    ``bound`` is the ladder value at the highest index not yet proven
    infeasible, an upper bound on the optimum.
    """
    ladder = cm.ladder
    start = oracle.tests
    win = cm.window()
    if win is None:
        return _masked_fallback(cm, oracle, family_nonempty, -1, start, False)
    lo, hi = win
    beta = ladder[hi]
    out = oracle.test(ladder[lo], beta)
    poisoned = out.answer is Answer.UNKNOWN
    if not out.feasible:
        return _masked_fallback(cm, oracle, family_nonempty, -1, start, poisoned)
    best = out.witness
    _, zmin, _ = evaluate(cm.base, best)
    lo_b, hi_b = ladder.rank(zmin), hi
    while hi_b - lo_b >= gap:
        mid = (lo_b + hi_b + 1) // 2
        out = oracle.test(ladder[mid], beta)
        if out.answer is Answer.UNKNOWN:
            poisoned = True
        if out.feasible:
            best = out.witness
            lo_b = ladder.rank(evaluate(cm.base, best)[1])
        else:
            hi_b = mid - 1
    status = Status.HEURISTIC if poisoned else Status.OPTIMAL
    return QBPResult(best, ladder[lo_b], status, oracle.tests - start, bound=ladder[hi_b])


def _standalone(search, cm: MaskedMatrix, family, mode: FeasibilityMode) -> SolveResult:
    t0 = time.perf_counter()
    oracle = WindowOracle(cm.base, family, mode)
    res = search(cm, oracle)
    stats = SolveStats(tests=oracle.tests, iterations=1, unknowns=oracle.unknowns,
                       elapsed=time.perf_counter() - t0, qbp_tests=[res.tests])
    status = res.status
    if oracle.unknowns and status is Status.OPTIMAL:
        status = Status.HEURISTIC
    return SolveResult(res.solution, res.value, status, stats)


def solve_qbp1(cm: MaskedMatrix, family, mode: FeasibilityMode) -> SolveResult:
    """Minimum masked Z_max over the family.

    The result's ``objective`` is the bottleneck value (not the range), and
    equals ``M`` when every feasible set touches a masked entry.
    """
    return _standalone(qbp1_search, cm, family, mode)


def solve_qbp2(cm: MaskedMatrix, family, mode: FeasibilityMode) -> SolveResult:
    """Maximum masked Z_min over the family; objective is ``-M`` when fully masked."""
    return _standalone(qbp2_search, cm, family, mode)


def masked(cost: np.ndarray, lower: Optional[int] = None, upper: Optional[int] = None) -> MaskedMatrix:
    return MaskedMatrix(cost, ValueLadder.from_cost(cost), lower, upper)
