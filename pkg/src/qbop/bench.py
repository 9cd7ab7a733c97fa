"""Run records, CSV I/O and the benchmark grid."""

from __future__ import annotations

import csv
import dataclasses
import itertools
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .balanced import ALGORITHMS, ALIASES, EarlyDetectionConfig, solve
from .families import FeasibilityMode
from .generate import GeneratorSpec, generate_qbalkp
from .model import Instance, SolveResult

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    mode: str
    ed: str
    objective: Optional[int]
    status: str
    tests: int
    iterations: int
    early: bool
    unknowns: int
    elapsed_ms: float
    error: str = ""
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_result(cls, instance_id, algorithm, mode, ed, res: SolveResult) -> "RunRecord":
        st = res.stats
        return cls(instance_id, algorithm, str(mode), ed, res.objective, res.status.value,
                   st.tests, st.iterations, st.early, st.unknowns, round(st.elapsed * 1000, 3))


FIELDS = [f.name for f in dataclasses.fields(RunRecord)]
HEADER = ["schema_version"] + [f for f in FIELDS if f != "schema_version"]


def _row(rec: RunRecord) -> dict:
    row = dataclasses.asdict(rec)
    row["objective"] = "" if rec.objective is None else rec.objective
    row["early"] = int(rec.early)
    return row


def write_records(path, records: Iterable[RunRecord], append: bool = False) -> None:
    path = Path(path)
    fresh = not (append and path.exists() and path.stat().st_size > 0)
    with path.open("a" if append else "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=HEADER)
        if fresh:
            writer.writeheader()
        for rec in records:
            writer.writerow(_row(rec))


def read_records(path) -> list[RunRecord]:
    out = []
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            if row["schema_version"] != SCHEMA_VERSION:
                raise ValueError(f"unsupported schema version {row['schema_version']}")
            out.append(RunRecord(
                instance_id=row["instance_id"], algorithm=row["algorithm"], mode=row["mode"],
                ed=row["ed"], objective=int(row["objective"]) if row["objective"] else None,
                status=row["status"], tests=int(row["tests"]), iterations=int(row["iterations"]),
                early=bool(int(row["early"])), unknowns=int(row["unknowns"]),
                elapsed_ms=float(row["elapsed_ms"]), error=row["error"],
                schema_version=row["schema_version"],
            ))
    return out


def parse_ed(text: str) -> EarlyDetectionConfig:
    """``off``, ``exact`` or ``d=<k>``."""
    text = text.strip().lower()
    if text == "off":
        return EarlyDetectionConfig()
    if text == "exact":
        return EarlyDetectionConfig(enabled=True)
    if text.startswith("d="):
        return EarlyDetectionConfig(enabled=True, d=int(text[2:]))
    raise ValueError(f"bad early-detection setting {text!r}; use off, exact or d=<k>")


def run_one(instance: Instance, instance_id: str, algorithm: str, mode: str, ed: str) -> RunRecord:
    try:
        res = solve(instance, algorithm, FeasibilityMode.parse(mode), parse_ed(ed))
    except Exception as exc:  # noqa: BLE001 - a failed cell is recorded, not fatal
        log.warning("run %s/%s/%s failed: %s", instance_id, algorithm, mode, exc)
        return RunRecord(instance_id, algorithm, mode, ed, None, "Error", 0, 0, False, 0, 0.0,
                         error=f"{type(exc).__name__}: {exc}")
    return RunRecord.from_result(instance_id, algorithm, mode, ed, res)


@dataclass
class Grid:
    m: list
    sigma: list
    s: list
    seeds: list
    algorithms: list
    modes: list = dataclasses.field(default_factory=lambda: ["ft2"])
    omega: list = dataclasses.field(default_factory=lambda: ["off"])

    @classmethod
    def from_dict(cls, data: dict) -> "Grid":
        data = dict(data)
        if isinstance(data.get("seeds"), int):
            data["seeds"] = list(range(data["seeds"]))
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        grid = cls(**{k: v if isinstance(v, list) else [v] for k, v in data.items()})
        bad = [a for a in grid.algorithms if a.lower() not in ALGORITHMS and a.lower() not in ALIASES]
        if bad:
            raise ValueError(f"unknown algorithms in grid: {bad}")
        return grid

    @classmethod
    def load(cls, path) -> "Grid":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def cells(self):
        for m, sigma, s, seed in itertools.product(self.m, self.sigma, self.s, self.seeds):
            spec = GeneratorSpec(m, sigma, s, seed)
            for algorithm, mode, ed in itertools.product(self.algorithms, self.modes, self.omega):
                yield spec, algorithm, mode, ed


def instance_id(spec: GeneratorSpec) -> str:
    return f"m{spec.m}-sigma{spec.sigma:g}-s{spec.s:g}-seed{spec.seed}"


def _run_cell(args) -> RunRecord:
    spec, algorithm, mode, ed = args
    return run_one(generate_qbalkp(spec), instance_id(spec), algorithm, mode, ed)


def run_grid(grid: Grid, workers: int = 1) -> list[RunRecord]:
    cells = list(grid.cells())
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(c) for c in cells]


def _cell_key(rec: RunRecord) -> tuple:
    head, _, _ = rec.instance_id.rpartition("-seed")
    return head, rec.algorithm, rec.mode, rec.ed


def summarize(records: Iterable[RunRecord]) -> list[dict]:
    """Per-cell means of running time and feasibility tests."""
    groups: dict = {}
    for rec in records:
        if rec.status == "Error":
            continue
        groups.setdefault(_cell_key(rec), []).append(rec)
    rows = []
    for (cell, algorithm, mode, ed), recs in groups.items():
        rows.append({
            "cell": cell, "algorithm": algorithm, "mode": mode, "ed": ed, "runs": len(recs),
            "mean_elapsed_ms": round(statistics.fmean(r.elapsed_ms for r in recs), 3),
            "mean_tests": round(statistics.fmean(r.tests for r in recs), 3),
            "mean_iterations": round(statistics.fmean(r.iterations for r in recs), 3),
        })
    return rows


def write_summary(path, rows: list[dict]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["cell", "algorithm", "mode", "ed", "runs",
                                                "mean_elapsed_ms", "mean_tests", "mean_iterations"])
        writer.writeheader()
        writer.writerows(rows)
