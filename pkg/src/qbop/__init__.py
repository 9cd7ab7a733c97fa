"""Solvers for the quadratic balanced optimization problem.

Minimise the range ``max - min`` of pairwise costs ``c_ij`` over ``S x S``
for ``S`` in a feasible family (knapsack covers or spanning trees).
"""

from .balanced import (ALGORITHMS, EarlyDetectionConfig, InfeasibleError, compute_delta,
                       compute_omega, solve, solve_bdt, solve_db, solve_ib, solve_tdt)
from .families import (FT1, FT2, FT3, Answer, FeasibilityMode, FeasibilityOutcome,
                       KnapsackFamily, SpanningTreeFamily, knapsack_feasible, tree_feasible)
from .model import (Instance, SolveResult, SolveStats, Status, ThresholdWindow, ValueLadder,
                    ViolationStructure, evaluate, violation_structure)
from .qbp import MaskedMatrix, masked, solve_qbp1, solve_qbp2
from .special import DecomposableInstance, solve_lbop, solve_qbop_product, solve_qbop_sum

__version__ = "0.1.0"
