"""Mixed-integer formulation of the balanced knapsack problem in LP format.

Variables (1-based to match LP conventions): ``x<i>`` selects element i,
``y<i>_<j>`` marks the ordered pair (i, j) as selected, ``u`` and ``v`` carry
Z_max and Z_min. With ``M = max c_ij``:

* minimise ``u - v``
* ``sum a_j x_j >= b``
* ``u - c_ij y_ij >= 0`` for every pair with ``c_ij != 0``
* ``v + (M - c_ij) y_ij <= M`` for every pair with ``c_ij != M``
* ``y_ij - x_i <= 0``, ``y_ij - x_j <= 0``, ``x_i + x_j - y_ij <= 1``
* ``0 <= u, v <= M``; all ``x`` and ``y`` binary.

The ``v`` rows are dropped exactly where ``c_ij`` equals M, even when M
occurs more than once; those rows would read ``v <= M`` and are implied by
the bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .families import KnapsackFamily
from .model import Instance

TERMS_PER_LINE = 8


def x_name(i: int) -> str:
    return f"x{i + 1}"


def y_name(i: int, j: int) -> str:
    return f"y{i + 1}_{j + 1}"


@dataclass
class Row:
    name: str
    coeffs: dict
    sense: str
    rhs: int


@dataclass
class LinearModel:
    objective: dict
    rows: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    binaries: list = field(default_factory=list)

    def add(self, name, terms, sense, rhs):
        coeffs: dict = {}
        for var, c in terms:
            coeffs[var] = coeffs.get(var, 0) + c
        self.rows.append(Row(name, {k: v for k, v in coeffs.items() if v != 0}, sense, rhs))


def build_model(inst: Instance) -> LinearModel:
    if not isinstance(inst.family, KnapsackFamily):
        raise ValueError("MIP export needs a knapsack instance")
    cost = inst.cost.tolist()
    m = inst.m
    big_m = max(max(r) for r in cost)
    a, b = inst.family.a, inst.family.b

    model = LinearModel(objective={"u": 1, "v": -1})
    model.add("knapsack", [(x_name(j), a[j]) for j in range(m)], ">=", b)
    for i in range(m):
        for j in range(m):
            c = cost[i][j]
            y = y_name(i, j)
            if c != 0:
                model.add(f"zmax_{i + 1}_{j + 1}", [("u", 1), (y, -c)], ">=", 0)
            if c != big_m:
                model.add(f"zmin_{i + 1}_{j + 1}", [("v", 1), (y, big_m - c)], "<=", big_m)
            model.add(f"link_a_{i + 1}_{j + 1}", [(y, 1), (x_name(i), -1)], "<=", 0)
            model.add(f"link_b_{i + 1}_{j + 1}", [(y, 1), (x_name(j), -1)], "<=", 0)
            model.add(f"link_c_{i + 1}_{j + 1}", [(x_name(i), 1), (x_name(j), 1), (y, -1)], "<=", 1)
    model.bounds = {"u": (0, big_m), "v": (0, big_m)}
    model.binaries = [x_name(i) for i in range(m)] + [y_name(i, j) for i in range(m) for j in range(m)]
    return model


def _expr(coeffs: dict) -> list:
    if not coeffs:
        return ["0 x1"]
    out = []
    for k, (var, c) in enumerate(coeffs.items()):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = abs(c)
        term = var if mag == 1 else f"{mag} {var}"
        out.append(f"{sign} {term}".strip())
    return out


def _wrap(head: str, terms: list, tail: str = "") -> list:
    lines = []
    for k in range(0, len(terms), TERMS_PER_LINE):
        chunk = " ".join(terms[k:k + TERMS_PER_LINE])
        lines.append((head if k == 0 else " " * len(head)) + chunk)
    lines[-1] += tail
    return lines


def to_lp(model: LinearModel) -> str:
    lines = ["\\ balanced knapsack MIP", "Minimize"]
    lines += _wrap(" obj: ", _expr(model.objective))
    lines.append("Subject To")
    for row in model.rows:
        lines += _wrap(f" {row.name}: ", _expr(row.coeffs), f" {row.sense} {row.rhs}")
    lines.append("Bounds")
    for var, (lo, hi) in model.bounds.items():
        lines.append(f" {lo} <= {var} <= {hi}")
    lines.append("Binaries")
    for k in range(0, len(model.binaries), TERMS_PER_LINE):
        lines.append(" " + " ".join(model.binaries[k:k + TERMS_PER_LINE]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(inst: Instance, path=None) -> str:
    text = to_lp(build_model(inst))
    if path is not None:
        Path(path).write_text(text)
    return text
