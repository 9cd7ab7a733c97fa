"""Command-line front end: ``qbop generate | solve | bench | export-mip``.

Exit codes: 0 solved, 2 infeasible, 3 bad input. ``QBOP_LOG`` sets the log
level (e.g. ``QBOP_LOG=debug``).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import io
from .balanced import ALGORITHMS, solve
from .bench import Grid, RunRecord, parse_ed, run_grid, summarize, write_records, write_summary
from .families import FeasibilityMode
from .generate import (GeneratorSpec, generate_decomposable, generate_qbalkp,
                       generate_tree_instance)
from .mip import export_lp
from .model import Instance, Status, ValueLadder
from .special import DecomposableInstance, solve_decomposable

EXIT_OK, EXIT_INFEASIBLE, EXIT_BAD_INPUT = 0, 2, 3

log = logging.getLogger("qbop")


class BadInput(Exception):
    pass


def _cmd_generate(args) -> int:
    if args.kind == "knapsack":
        inst = generate_qbalkp(GeneratorSpec(args.m, args.sigma, args.s, args.seed))
    elif args.kind == "spanning_tree":
        inst = generate_tree_instance(args.n, args.q, args.sigma, args.seed)
    else:
        inst = generate_decomposable(args.kind, args.n, args.q, args.seed)
    text = io.dumps(inst)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    cost = inst.cost if isinstance(inst, Instance) else inst.cost_matrix()
    summary = {"kind": args.kind, "m": int(cost.shape[0]), "p": len(ValueLadder.from_cost(cost)),
               "delta": int(cost.max() - cost.min())}
    print(json.dumps(summary), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = io.load(args.instance)
    mode = FeasibilityMode.parse(args.mode)
    ed = parse_ed(args.omega)
    inst_id = Path(args.instance).stem
    if args.algorithm == "decomp":
        if not isinstance(inst, DecomposableInstance):
            raise BadInput("algorithm 'decomp' needs a sum or product instance")
        res = solve_decomposable(inst)
    else:
        if isinstance(inst, DecomposableInstance):
            inst = Instance(inst.cost_matrix(), inst.family)
        res = solve(inst, args.algorithm, mode, ed)
    rec = RunRecord.from_result(inst_id, args.algorithm, mode, args.omega, res)
    out = dataclasses.asdict(rec)
    out["solution"] = None if res.solution is None else sorted(res.solution)
    print(json.dumps(out))
    if args.csv:
        write_records(args.csv, [rec], append=True)
    return EXIT_INFEASIBLE if res.status is Status.INFEASIBLE else EXIT_OK


def _cmd_bench(args) -> int:
    grid = Grid.load(args.grid)
    records = run_grid(grid, workers=args.workers)
    write_records(args.out, records)
    summary_path = args.summary or str(Path(args.out).with_suffix(".summary.csv"))
    write_summary(summary_path, summarize(records))
    failed = sum(r.status == "Error" for r in records)
    print(json.dumps({"runs": len(records), "failed": failed, "csv": str(args.out),
                      "summary": summary_path}))
    return EXIT_OK


def _cmd_export(args) -> int:
    inst = io.load(args.instance)
    if not isinstance(inst, Instance) or inst.kind != "knapsack":
        raise BadInput("export-mip needs a knapsack instance")
    text = export_lp(inst, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbop", description="Quadratic balanced optimization solvers")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance as JSON")
    g.add_argument("--kind", choices=["knapsack", "spanning_tree", "sum", "product"], default="knapsack")
    g.add_argument("--m", type=int, default=50, help="knapsack size")
    g.add_argument("--sigma", type=float, default=100.0)
    g.add_argument("--s", type=float, default=0.1, help="knapsack density parameter")
    g.add_argument("--n", type=int, default=6, help="graph node count")
    g.add_argument("--q", type=float, default=0.6, help="graph edge probability")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (stdout if omitted)")
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=list(ALGORITHMS) + ["decomp"], default="bdt")
    s.add_argument("--mode", default="ft2", help="ft1, ft2 or ft3=<ms>")
    s.add_argument("--omega", default="off", help="off, exact or d=<k>")
    s.add_argument("--seed", type=int, default=0, help="accepted for symmetry; solves are deterministic")
    s.add_argument("--csv", help="append the run record to this CSV")
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="run a generator/algorithm grid")
    b.add_argument("--grid", required=True, help="JSON grid spec")
    b.add_argument("--out", required=True, help="run-record CSV")
    b.add_argument("--summary", help="per-cell summary CSV (default: <out>.summary.csv)")
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=_cmd_bench)

    e = sub.add_parser("export-mip", help="write the knapsack MIP in LP format")
    e.add_argument("instance")
    e.add_argument("--out", help="output .lp path (stdout if omitted)")
    e.set_defaults(func=_cmd_export)
    return p


def main(argv=None) -> int:
    level = os.environ.get("QBOP_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_BAD_INPUT
    try:
        return args.func(args)
    except (BadInput, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"qbop: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
