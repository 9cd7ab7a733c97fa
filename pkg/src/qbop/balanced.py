"""Exact and heuristic algorithms for the range objective.

All solvers share one counting :class:`WindowOracle` per run, so the
feasibility-test counter includes every test made inside bottleneck
subproblems and inside the bound computation for early detection.

Ladder indices are 0-based throughout.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .families import FT2, FeasibilityMode, WindowOracle
from .model import Instance, SolveResult, SolveStats, Status, ValueLadder, evaluate
from .qbp import MaskedMatrix, qbp1_search, qbp2_search

log = logging.getLogger(__name__)

ALGORITHMS = ("bdt", "tdt", "ib1", "ib2", "db")
ALIASES = {"ib": "ib1"}


class InfeasibleError(ValueError):
    """Raised when a bound is requested for an empty family."""


@dataclass(frozen=True)
class EarlyDetectionConfig:
    """Early optimality detection.

    ``omega`` must bound Z_min of every optimal solution from above (used by
    BDT and IB1); ``delta`` must bound Z_max of every optimal solution from
    below (TDT and IB2). Missing bounds are computed at solve time with a
    bottleneck search stopped at ladder gap ``d``.
    """

    enabled: bool = False
    omega: Optional[int] = None
    delta: Optional[int] = None
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("relaxation gap d must be >= 1")


NO_EARLY = EarlyDetectionConfig()


def _omega(oracle: WindowOracle, ladder: ValueLadder, d: int) -> int:
    res = qbp2_search(MaskedMatrix(oracle.cost, ladder), oracle, gap=d)
    if res.value is None:
        raise InfeasibleError("family is empty; omega is undefined")
    return res.bound


def _delta(oracle: WindowOracle, ladder: ValueLadder, d: int) -> int:
    res = qbp1_search(MaskedMatrix(oracle.cost, ladder), oracle, gap=d)
    if res.value is None:
        raise InfeasibleError("family is empty; delta is undefined")
    return res.bound


def compute_omega(cost: np.ndarray, family, mode: FeasibilityMode = FT2, d: int = 1) -> int:
    """Upper bound on the optimal Z_min: the max-min bottleneck value.

    ``d=1`` gives the exact optimum; larger ``d`` stops the search once fewer
    than ``d`` ladder indices remain unresolved and returns the highest one.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    return _omega(WindowOracle(cost, family, mode), ValueLadder.from_cost(cost), d)


def compute_delta(cost: np.ndarray, family, mode: FeasibilityMode = FT2, d: int = 1) -> int:
    """Lower bound on the optimal Z_max: the min-max bottleneck value."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _delta(WindowOracle(cost, family, mode), ValueLadder.from_cost(cost), d)


class _Run:
    """Incumbent and counters for one solve."""

    def __init__(self, cost, family, mode):
        self.t0 = time.perf_counter()
        self.cost = cost
        self.mode = mode
        self.oracle = WindowOracle(cost, family, mode)
        self.ladder = ValueLadder.from_cost(cost)
        self.stats = SolveStats()
        self.obj: Optional[int] = None
        self.sol: Optional[frozenset] = None

    def offer(self, subset) -> tuple[int, int]:
        zmax, zmin, z = evaluate(self.cost, subset)
        if self.obj is None or z < self.obj:
            self.obj, self.sol = z, frozenset(subset)
        return zmax, zmin

    def bound(self, ed: EarlyDetectionConfig, which: str) -> Optional[int]:
        if not ed.enabled:
            return None
        value = getattr(ed, which)
        if value is None:
            try:
                value = (_omega if which == "omega" else _delta)(self.oracle, self.ladder, ed.d)
            except InfeasibleError:
                return None
        return value

    def finish(self) -> SolveResult:
        st = self.stats
        st.tests = self.oracle.tests
        st.unknowns = self.oracle.unknowns
        st.elapsed = time.perf_counter() - self.t0
        if self.sol is None:
            status = Status.INFEASIBLE
        elif not self.mode.exact or st.unknowns:
            status = Status.HEURISTIC
        else:
            status = Status.OPTIMAL
        return SolveResult(self.sol, self.obj, status, st)


def solve_bdt(cost: np.ndarray, family, mode: FeasibilityMode = FT2,
              ed: EarlyDetectionConfig = NO_EARLY) -> SolveResult:
    """Bottom-up double threshold search over ladder windows ``[w_l, w_u]``.

    A feasible window raises the lower threshold past
    ``max(Z_min(S), Z_max(S) - obj)``; an infeasible one raises the upper
    threshold by one step. With early detection the run ends as soon as
    ``obj + omega <= w_u``.
    """
    run = _Run(cost, family, mode)
    omega = run.bound(ed, "omega")
    w, p = run.ladder, len(run.ladder)
    l = u = 0
    while l < p and u < p:
        run.stats.iterations += 1
        out = run.oracle.test(w[l], w[u])
        if not out.feasible:
            u += 1
            continue
        zmax, zmin = run.offer(out.witness)
        if run.obj == 0:
            break
        if omega is not None and run.obj + omega <= w[u]:
            run.stats.early = True
            break
        l = w.first_above(max(zmin, zmax - run.obj))
        if l < p and w[l] > w[u]:
            u = l
    return run.finish()


def solve_tdt(cost: np.ndarray, family, mode: FeasibilityMode = FT2,
              ed: EarlyDetectionConfig = NO_EARLY) -> SolveResult:
    """Top-down mirror of :func:`solve_bdt`.

    Both thresholds start at ``w_p``. A feasible window lowers the upper
    threshold below ``min(Z_max(S), Z_min(S) + obj)``; an infeasible one
    lowers the lower threshold by one step. Early exit when
    ``delta - obj >= w_l``.
    """
    run = _Run(cost, family, mode)
    delta = run.bound(ed, "delta")
    w, p = run.ladder, len(run.ladder)
    l = u = p - 1
    while l >= 0 and u >= 0:
        run.stats.iterations += 1
        out = run.oracle.test(w[l], w[u])
        if not out.feasible:
            l -= 1
            continue
        zmax, zmin = run.offer(out.witness)
        if run.obj == 0:
            break
        if delta is not None and delta - run.obj >= w[l]:
            run.stats.early = True
            break
        u = w.last_below(min(zmax, zmin + run.obj))
        if u >= 0 and w[u] < w[l]:
            l = u
    return run.finish()


def _solve_ib1(run: _Run, ed: EarlyDetectionConfig) -> SolveResult:
    omega = run.bound(ed, "omega")
    lower = None
    nonempty = False
    while True:
        res = qbp1_search(MaskedMatrix(run.cost, run.ladder, lower=lower), run.oracle, nonempty)
        run.stats.iterations += 1
        run.stats.qbp_tests.append(res.tests)
        if res.value is None or res.masked:
            break
        nonempty = True
        z0 = res.value
        zmax, zmin = run.offer(res.solution)
        if run.obj == 0:
            break
        if omega is not None and run.obj + omega <= z0:
            run.stats.early = True
            break
        # entries <= L become M
        lower = max(zmin, zmax - run.obj) + 1
    return run.finish()


def _solve_ib2(run: _Run, ed: EarlyDetectionConfig) -> SolveResult:
    delta = run.bound(ed, "delta")
    upper = None
    nonempty = False
    while True:
        res = qbp2_search(MaskedMatrix(run.cost, run.ladder, upper=upper), run.oracle, nonempty)
        run.stats.iterations += 1
        run.stats.qbp_tests.append(res.tests)
        if res.value is None or res.masked:
            break
        nonempty = True
        z0 = res.value
        zmax, zmin = run.offer(res.solution)
        if run.obj == 0:
            break
        if delta is not None and delta - run.obj >= z0:
            run.stats.early = True
            break
        # entries >= U become -M
        upper = min(zmax, zmin + run.obj) - 1
    return run.finish()


def solve_ib(cost: np.ndarray, family, mode: FeasibilityMode = FT2,
             ed: EarlyDetectionConfig = NO_EARLY, variant: str = "ib1") -> SolveResult:
    """Iterative bottleneck algorithm.

    ``ib1`` repeatedly solves min-max bottleneck problems while masking
    entries at or below ``max(Z_min(S), Z_max(S) - obj)`` with ``M``; ``ib2``
    repeatedly solves max-min problems while masking entries at or above
    ``min(Z_max(S), Z_min(S) + obj)`` with ``-M``. Both stop once the
    bottleneck optimum is a masked value.
    """
    run = _Run(cost, family, mode)
    if variant == "ib1":
        return _solve_ib1(run, ed)
    if variant == "ib2":
        return _solve_ib2(run, ed)
    raise ValueError(f"unknown iterative bottleneck variant {variant!r}")


def solve_db(cost: np.ndarray, family, mode: FeasibilityMode = FT2) -> SolveResult:
    """Double bottleneck algorithm: alternate a min-max solve that raises the
    lower mask past Z_min(S) and a max-min solve that drops the upper mask
    below Z_max(S)."""
    run = _Run(cost, family, mode)
    lower = upper = None
    nonempty = False
    while True:
        run.stats.iterations += 1
        res = qbp1_search(MaskedMatrix(run.cost, run.ladder, lower, upper), run.oracle, nonempty)
        run.stats.qbp_tests.append(res.tests)
        if res.value is None or res.masked:
            break
        nonempty = True
        _, zmin = run.offer(res.solution)
        if run.obj == 0:
            break
        lower = zmin + 1

        res = qbp2_search(MaskedMatrix(run.cost, run.ladder, lower, upper), run.oracle, True)
        run.stats.qbp_tests.append(res.tests)
        if res.masked:
            break
        zmax, _ = run.offer(res.solution)
        if run.obj == 0:
            break
        upper = zmax - 1
    return run.finish()


def solve(instance: Instance, algorithm: str, mode: FeasibilityMode = FT2,
          ed: EarlyDetectionConfig = NO_EARLY) -> SolveResult:
    algorithm = algorithm.lower()
    algorithm = ALIASES.get(algorithm, algorithm)
    cost, family = instance.cost, instance.family
    if algorithm == "bdt":
        res = solve_bdt(cost, family, mode, ed)
    elif algorithm == "tdt":
        res = solve_tdt(cost, family, mode, ed)
    elif algorithm in ("ib1", "ib2"):
        res = solve_ib(cost, family, mode, ed, variant=algorithm)
    elif algorithm == "db":
        res = solve_db(cost, family, mode)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    log.info("%s/%s: obj=%s status=%s tests=%d iterations=%d",
             algorithm, mode, res.objective, res.status.value, res.stats.tests, res.stats.iterations)
    return res
