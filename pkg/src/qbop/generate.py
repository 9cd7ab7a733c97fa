"""Seeded instance generators.

Every random quantity is derived from the raw 64-bit output stream of
numpy's ``PCG64`` seeded through ``SeedSequence(seed)``, consumed in a fixed
order, so the same spec and seed reproduce the same instance bit for bit:

* uniform double: ``(x >> 11) * 2**-53``;
* standard normal: inverse CDF (``scipy.special.ndtri``) of
  ``((x >> 11) + 0.5) * 2**-53``, one raw draw per variate;
* rounding to integers: nearest, ties away from zero;
* uniform integer on ``[lo, hi]``: Lemire's multiply-shift with rejection.

Knapsack instances draw the ``m*m`` pre-shift costs row-major, then the
``m`` weights, then the demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .families import KnapsackFamily, SpanningTreeFamily
from .model import Instance

_MASK64 = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)


class GenerationError(RuntimeError):
    pass


class Stream:
    """Deterministic draws on top of the PCG64 raw stream."""

    def __init__(self, seed: int):
        self.bitgen = np.random.PCG64(seed)

    def raw(self, k: int) -> np.ndarray:
        return self.bitgen.random_raw(k)

    def uniform(self, k: int) -> np.ndarray:
        return (self.raw(k) >> np.uint64(11)).astype(np.float64) * _INV53

    def normal(self, k: int) -> np.ndarray:
        u = ((self.raw(k) >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53
        return ndtri(u)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` inclusive."""
        n = hi - lo + 1
        if n <= 0:
            raise ValueError(f"empty range [{lo}, {hi}]")
        prod = int(self.raw(1)[0]) * n
        low = prod & _MASK64
        if low < n:
            threshold = ((1 << 64) - n) % n
            while low < threshold:
                prod = int(self.raw(1)[0]) * n
                low = prod & _MASK64
        return lo + (prod >> 64)


def round_half_away(x: np.ndarray) -> np.ndarray:
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


@dataclass(frozen=True)
class GeneratorSpec:
    m: int
    sigma: float
    s: float
    seed: int = 0

    def __post_init__(self):
        if int(self.m) != self.m or self.m <= 1:
            raise ValueError("m must be an integer > 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if not 0 <= self.s <= 1:
            raise ValueError("s must lie in [0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a non-negative 64-bit integer")


def demand_range(m: int, s: float) -> tuple[int, int]:
    return int(np.floor(250 * m * s)), int(np.floor(750 * m * s))


def draw_qbalkp(spec: GeneratorSpec) -> tuple[np.ndarray, list, int]:
    """Return ``(pre_shift_costs, weights, demand)`` for ``spec``."""
    st = Stream(spec.seed)
    m = spec.m
    raw_costs = round_half_away(spec.sigma * st.normal(m * m)).reshape(m, m)
    weights = [st.randint(0, 1000) for _ in range(m)]
    demand = st.randint(*demand_range(m, spec.s))
    return raw_costs, weights, demand


def generate_qbalkp(spec: GeneratorSpec) -> Instance:
    """Random quadratic balanced knapsack instance.

    Costs are rounded normal variates with mean 0 and deviation ``sigma``,
    shifted so the smallest entry is 0; weights are uniform on ``[0, 1000]``
    and the demand uniform on ``[floor(250 m s), floor(750 m s)]``.
    """
    raw_costs, weights, demand = draw_qbalkp(spec)
    cost = raw_costs - raw_costs.min()
    return Instance(cost, KnapsackFamily(weights, demand))


def generate_random_graph(n: int, q: float, seed: int, max_retries: int = 1000) -> SpanningTreeFamily:
    """Connected random graph: each pair ``u < v`` (lexicographic) is an edge
    with probability ``q``; redraw until connected."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    st = Stream(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(max_retries):
        keep = st.uniform(len(pairs)) < q
        fam = SpanningTreeFamily(n, [e for e, k in zip(pairs, keep) if k])
        if fam.spanning_tree(range(fam.m)) is not None:
            return fam
    raise GenerationError(f"no connected graph after {max_retries} draws (n={n}, q={q})")


def generate_tree_instance(n: int, q: float, sigma: float, seed: int) -> Instance:
    """Spanning-tree family with a shifted rounded-normal cost matrix."""
    fam = generate_random_graph(n, q, seed)
    st = Stream(seed + 1)
    raw = round_half_away(sigma * st.normal(fam.m * fam.m)).reshape(fam.m, fam.m)
    return Instance(raw - raw.min(), fam)


def generate_decomposable(kind: str, n: int, q: float, seed: int, value_max: int = 20):
    """Random decomposable instance on a connected random graph with integer
    vectors ``a, b`` uniform on ``[0, value_max]``."""
    from .special import DecomposableInstance

    fam = generate_random_graph(n, q, seed)
    st = Stream(seed + 1)
    a = [st.randint(0, value_max) for _ in range(fam.m)]
    b = [st.randint(0, value_max) for _ in range(fam.m)]
    return DecomposableInstance(kind, tuple(a), tuple(b), fam)
