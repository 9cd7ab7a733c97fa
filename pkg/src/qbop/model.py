"""Instance data model and evaluation primitives.

Costs live in an immutable ``int64`` numpy array. Subsets are frozensets of
0-based element indices. ``S x S`` always includes the diagonal, so a
singleton subset has objective 0.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


def as_cost_matrix(cost) -> np.ndarray:
    """Validate and freeze a square, non-negative integer cost matrix."""
    arr = np.asarray(cost)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"cost matrix must be square with m >= 1, got shape {arr.shape}")
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(arr == np.round(arr)):
            arr = arr.astype(np.int64)
        else:
            raise ValueError("cost entries must be integers")
    arr = np.array(arr, dtype=np.int64)
    if (arr < 0).any():
        raise ValueError("cost entries must be non-negative")
    arr.setflags(write=False)
    return arr


def as_subset(members: Iterable[int], m: int) -> frozenset:
    s = frozenset(int(i) for i in members)
    if not s:
        raise ValueError("subset must be non-empty")
    if min(s) < 0 or max(s) >= m:
        raise ValueError(f"subset indices must lie in [0, {m})")
    return s


def evaluate(cost: np.ndarray, subset: Iterable[int]) -> tuple[int, int, int]:
    """Return ``(zmax, zmin, z)`` over all ordered pairs of ``subset``."""
    idx = sorted(as_subset(subset, cost.shape[0]))
    block = cost[np.ix_(idx, idx)]
    zmax = int(block.max())
    zmin = int(block.min())
    return zmax, zmin, zmax - zmin


class ValueLadder:
    """Ascending distinct cost values with exact rank lookup."""

    def __init__(self, values: Iterable[int]):
        vals = sorted({int(v) for v in values})
        if not vals:
            raise ValueError("ladder needs at least one value")
        self.values: tuple[int, ...] = tuple(vals)
        self._rank = {v: k for k, v in enumerate(self.values)}

    @classmethod
    def from_cost(cls, cost: np.ndarray) -> "ValueLadder":
        return cls(np.unique(cost).tolist())

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __iter__(self):
        return iter(self.values)

    def rank(self, value: int) -> int:
        return self._rank[int(value)]

    def first_above(self, x) -> int:
        """Smallest index k with ``values[k] > x`` (``len`` if none)."""
        return bisect.bisect_right(self.values, x)

    def last_below(self, x) -> int:
        """Largest index k with ``values[k] < x`` (-1 if none)."""
        return bisect.bisect_left(self.values, x) - 1

    def __repr__(self) -> str:
        return f"ValueLadder(p={len(self)}, lo={self.values[0]}, hi={self.values[-1]})"


@dataclass(frozen=True)
class ThresholdWindow:
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha > self.beta:
            raise ValueError(f"window needs alpha <= beta, got [{self.alpha}, {self.beta}]")


@dataclass(frozen=True)
class ViolationStructure:
    """Elements and pairs that a window rules out.

    ``adjacency[i]`` is a bitset over the unforbidden partners of ``i`` that
    conflict with it; forbidden elements carry an empty row.
    """

    m: int
    forbidden: frozenset
    adjacency: tuple

    @property
    def allowed_mask(self) -> int:
        mask = (1 << self.m) - 1
        for i in self.forbidden:
            mask &= ~(1 << i)
        return mask

    @property
    def conflicts(self) -> frozenset:
        pairs = set()
        for i, row in enumerate(self.adjacency):
            while row:
                low = row & -row
                j = low.bit_length() - 1
                if i < j:
                    pairs.add((i, j))
                row ^= low
        return frozenset(pairs)

    def has_conflicts(self) -> bool:
        return any(self.adjacency)

    def admits(self, subset: Iterable[int]) -> bool:
        """True when no member is forbidden and no two members conflict."""
        bits = 0
        for i in subset:
            if i in self.forbidden:
                return False
            bits |= 1 << i
        return all(not (self.adjacency[i] & bits) for i in subset)


def _row_bits(rows: np.ndarray) -> list[int]:
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def violation_structure(cost: np.ndarray, alpha, beta) -> ViolationStructure:
    if alpha > beta:
        raise ValueError(f"window needs alpha <= beta, got [{alpha}, {beta}]")
    m = cost.shape[0]
    outside = (cost < alpha) | (cost > beta)
    diag = np.diagonal(outside)
    forbidden = frozenset(np.flatnonzero(diag).tolist())
    pair = outside | outside.T
    pair[diag, :] = False
    pair[:, diag] = False
    np.fill_diagonal(pair, False)
    return ViolationStructure(m=m, forbidden=forbidden, adjacency=tuple(_row_bits(pair)))


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    HEURISTIC = "Heuristic"
    INFEASIBLE = "Infeasible"


@dataclass
class SolveStats:
    tests: int = 0
    iterations: int = 0
    early: bool = False
    unknowns: int = 0
    elapsed: float = 0.0
    qbp_tests: list = field(default_factory=list)


@dataclass
class SolveResult:
    solution: Optional[frozenset]
    objective: Optional[int]
    status: Status
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def feasible(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True, eq=False)
class Instance:
    """A cost matrix paired with a feasible-family description."""

    cost: np.ndarray
    family: object

    def __post_init__(self):
        object.__setattr__(self, "cost", as_cost_matrix(self.cost))
        if self.family.m != self.cost.shape[0]:
            raise ValueError(
                f"family has {self.family.m} elements but cost matrix is {self.cost.shape[0]}x{self.cost.shape[0]}"
            )

    @property
    def m(self) -> int:
        return self.cost.shape[0]

    @property
    def kind(self) -> str:
        return self.family.kind

    def ladder(self) -> ValueLadder:
        return ValueLadder.from_cost(self.cost)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return np.array_equal(self.cost, other.cost) and self.family == other.family

    __hash__ = None
