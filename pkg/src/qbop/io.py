"""Instance JSON reading and writing.

Knapsack::

    {"kind": "knapsack", "m": 3, "cost": [[...], ...], "a": [...], "b": 9}

Spanning tree (nodes ``0..n-1``, element ``e`` is ``edges[e]``)::

    {"kind": "spanning_tree", "m": 3, "cost": [[...]], "n": 3, "edges": [[0, 1], ...]}

Decomposable costs over a graph::

    {"kind": "sum" | "product", "a": [...], "b": [...], "graph": {"n": 3, "edges": [...]}}

:func:`dumps` writes one canonical layout (fixed key order, one matrix row
per line), so ``dumps(loads(text)) == text`` for any text it produced.
"""

from __future__ import annotations

import json
from pathlib import Path

from .families import KnapsackFamily, SpanningTreeFamily
from .model import Instance
from .special import DecomposableInstance


def _flat(values) -> str:
    return json.dumps([int(v) for v in values])


def _matrix(rows) -> str:
    body = ",\n".join("    " + _flat(r) for r in rows)
    return "[\n" + body + "\n  ]"


def _edges(edges) -> str:
    return json.dumps([[int(u), int(v)] for u, v in edges])


def dumps(inst) -> str:
    if isinstance(inst, DecomposableInstance):
        fam = inst.family
        parts = [
            ("kind", json.dumps(inst.kind)),
            ("a", _flat(inst.a)),
            ("b", _flat(inst.b)),
            ("graph", '{"n": %d, "edges": %s}' % (fam.n, _edges(fam.edges))),
        ]
    elif isinstance(inst, Instance):
        fam = inst.family
        parts = [("kind", json.dumps(fam.kind)), ("m", str(inst.m)), ("cost", _matrix(inst.cost.tolist()))]
        if isinstance(fam, KnapsackFamily):
            parts += [("a", _flat(fam.a)), ("b", str(fam.b))]
        elif isinstance(fam, SpanningTreeFamily):
            parts += [("n", str(fam.n)), ("edges", _edges(fam.edges))]
        else:
            raise TypeError(f"cannot serialise family {type(fam).__name__}")
    else:
        raise TypeError(f"cannot serialise {type(inst).__name__}")
    return "{\n" + ",\n".join(f'  "{k}": {v}' for k, v in parts) + "\n}\n"


def _require(data: dict, *keys):
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValueError(f"instance JSON is missing {', '.join(missing)}")


def from_dict(data: dict):
    if not isinstance(data, dict):
        raise ValueError("instance JSON must be an object")
    _require(data, "kind")
    kind = data["kind"]
    if kind in ("sum", "product"):
        _require(data, "a", "b", "graph")
        g = data["graph"]
        _require(g, "n", "edges")
        return DecomposableInstance(kind, tuple(data["a"]), tuple(data["b"]),
                                    SpanningTreeFamily(g["n"], g["edges"]))
    _require(data, "m", "cost")
    if kind == "knapsack":
        _require(data, "a", "b")
        fam = KnapsackFamily(tuple(data["a"]), data["b"])
    elif kind == "spanning_tree":
        _require(data, "n", "edges")
        fam = SpanningTreeFamily(data["n"], data["edges"])
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    inst = Instance(data["cost"], fam)
    if inst.m != data["m"]:
        raise ValueError(f"declared m={data['m']} but cost matrix has {inst.m} rows")
    return inst


def loads(text: str):
    return from_dict(json.loads(text))


def load(path):
    return loads(Path(path).read_text())


def dump(inst, path) -> None:
    Path(path).write_text(dumps(inst))
