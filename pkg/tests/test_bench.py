import json

import pytest

from qbop.bench import (HEADER, Grid, RunRecord, parse_ed, read_records, run_grid, run_one,
                        summarize, write_records, write_summary)
from qbop.model import Instance
from qbop.families import KnapsackFamily

SPEC_GRID = {"m": 20, "sigma": 100, "s": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
             "seeds": 5, "algorithms": ["bdt", "ib"]}


def test_parse_ed():
    assert not parse_ed("off").enabled
    assert parse_ed("exact").enabled and parse_ed("exact").d == 1
    assert parse_ed("d=8").d == 8
    for bad in ("on", "d=0", "d=x"):
        with pytest.raises(ValueError):
            parse_ed(bad)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid.from_dict({**SPEC_GRID, "algorithms": ["simplex"]})
    with pytest.raises(ValueError):
        Grid.from_dict({**SPEC_GRID, "colour": "red"})


def test_csv_round_trip(tmp_path, t1):
    recs = [run_one(t1, "t1", a, "ft2", "off") for a in ("bdt", "ib1")]
    path = tmp_path / "runs.csv"
    write_records(path, recs[:1])
    write_records(path, recs[1:], append=True)
    assert path.read_text().splitlines()[0].split(",") == HEADER
    assert read_records(path) == recs


def test_failed_run_is_recorded(t1):
    rec = run_one(t1, "t1", "nope", "ft2", "off")
    assert rec.status == "Error" and "nope" in rec.error


def test_read_rejects_other_schema(tmp_path, t1):
    path = tmp_path / "runs.csv"
    write_records(path, [run_one(t1, "t1", "bdt", "ft2", "off")])
    path.write_text(path.read_text().replace("\n1,", "\n2,"))
    with pytest.raises(ValueError):
        read_records(path)


def test_spec_grid_rows_and_trend(tmp_path):
    grid = Grid.from_dict(SPEC_GRID)
    recs = run_grid(grid, workers=2)
    assert len(recs) == 100
    assert all(r.status == "Optimal" for r in recs)
    rows = summarize(recs)
    by_cell: dict = {}
    for row in rows:
        by_cell.setdefault(row["cell"], {})[row["algorithm"]] = row["mean_tests"]
    wins = sum(c["ib"] < c["bdt"] for c in by_cell.values())
    assert wins >= 0.8 * len(by_cell)
    # identical objective per instance
    objs: dict = {}
    for r in recs:
        objs.setdefault(r.instance_id, set()).add(r.objective)
    assert all(len(v) == 1 for v in objs.values())
    write_summary(tmp_path / "summary.csv", rows)
    assert len((tmp_path / "summary.csv").read_text().splitlines()) == len(rows) + 1
