"""The acceptance gate: one test per criterion, each printing a PASS line
with its measured runtime (run with `pytest tests/test_acceptance.py -s`).
"""

from __future__ import annotations

import itertools
import json
import random
import time
from datetime import date, datetime

import pytest

from conftest import run_cli, unchanged
from oracles import backtrack_match, cells_of_range, match_vector
from wbgen import ScriptRunner, gen_change_log, gen_formula
from sheetaudit import load_workbook
from sheetaudit.addresses import parse_a1
from sheetaudit.checks import scan
from sheetaudit.filters import (
    AuthorPattern,
    ContentTransition,
    DateRange,
    FilterSpec,
    apply_filters,
)
from sheetaudit.formulas import (
    classify_content,
    fold_constant,
    parse_formula,
    print_canonical,
    relative_shape,
)
from sheetaudit.rebuild import Checkpoint, current_state, replay_records, replay_to, revert_all
from sheetaudit.service import create_app
from sheetaudit.values import formula as formula_content
from sheetaudit.wildcards import _compiled, match_wildcard


def report(name: str, started: float) -> None:
    print(f"\nACCEPTANCE {name}: PASS ({time.perf_counter() - started:.2f}s)")


def test_sample_file_change_listing(fixture_path):
    """23 records (22 cell-content + 1 insertion), one author and day,
    exact detail strings for K22 and the insertion; under one second."""
    started = time.perf_counter()
    table = run_cli("changes", str(fixture_path))
    nd = run_cli("changes", str(fixture_path), "--format", "ndjson")
    assert table.code == 0 and nd.code == 0
    records = [json.loads(line) for line in nd.out.splitlines()]
    assert len(records) == 23
    kinds = [r["kind"] for r in records]
    assert kinds.count("cell-content") == 22
    assert kinds.count("row-insertion") == 1
    assert {r["author"] for r in records} == {"Neil Smith"}
    assert {r["timestamp"][:10] for r in records} == {"2003-03-28"}
    k22 = next(r for r in records if r.get("address") == "K22")
    assert k22["detail"] == "<empty> -> =K8-K18-K20 {$5,150 (currency)}"
    insertion = next(r for r in records if r["kind"] == "row-insertion")
    assert insertion["detail"] == "1 row at row 17"
    assert "<empty> -> =K8-K18-K20 {$5,150 (currency)}" in table.out
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    report("sample-file change listing", started)


def test_filter_suite(fixture_path):
    """Kind and transition filters hit their exact counts; the three-filter
    scenario equals per-record brute force on a 200-record synthetic log."""
    started = time.perf_counter()
    one = run_cli("changes", str(fixture_path), "--filter", "+kind=row-insert",
                  "--format", "ndjson")
    assert len(one.out.splitlines()) == 1
    fifteen = run_cli("changes", str(fixture_path), "--filter", "-transition=empty->any",
                      "--format", "ndjson")
    assert len(fifteen.out.splitlines()) == 15

    rng = random.Random(20011224)
    workbook = gen_change_log(rng, 200)
    specs = [
        FilterSpec("include", AuthorPattern("J* Doe", ignore_case=True)),
        FilterSpec("include", DateRange(date(2001, 12, 24), date(2002, 1, 1))),
        FilterSpec("exclude", ContentTransition("empty", "dont-care")),
    ]
    got = apply_filters(specs, workbook)

    def keep(record) -> bool:
        if not backtrack_match("j* doe", record.author.casefold()):
            return False
        if not date(2001, 12, 24) <= record.timestamp.date() <= date(2002, 1, 1):
            return False
        if record.kind == "cell-content" and record.before.is_empty:
            return False
        return True

    expected = [r for r in workbook.changes if keep(r)]
    assert got == expected
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    report("filter suite", started)


def test_wildcard_matcher_exhaustive():
    """Every pattern over {a,b,c,*,?} and subject over {a,b,c}, both up to
    length 6, agrees with the exhaustive all-alignments oracle."""
    numpy = pytest.importorskip("numpy")
    started = time.perf_counter()
    symbols = "abc"
    subjects = [
        "".join(p)
        for n in range(0, 7)
        for p in itertools.product(symbols, repeat=n)
    ]
    width = 6
    padded = numpy.zeros((len(subjects), width), dtype=numpy.uint16)
    lengths = numpy.array([len(s) for s in subjects])
    for i, s in enumerate(subjects):
        for j, ch in enumerate(s):
            padded[i, j] = ord(ch)

    # the tabulated oracle agrees with the plain backtracker
    rng = random.Random(6)
    spot_patterns = [
        "".join(rng.choice("abc*?") for _ in range(rng.randrange(0, 7)))
        for _ in range(150)
    ]
    for pattern in spot_patterns:
        vector = match_vector(pattern, padded, lengths)
        for i in rng.sample(range(len(subjects)), 40):
            assert vector[i] == backtrack_match(pattern, subjects[i])

    checked = 0
    api_rng = random.Random(7)
    for n in range(0, 7):
        for pattern_tuple in itertools.product("abc*?", repeat=n):
            pattern = "".join(pattern_tuple)
            expected = match_vector(pattern, padded, lengths)
            regex = _compiled(pattern)
            got = numpy.fromiter(
                (regex.match(s) is not None for s in subjects),
                dtype=bool,
                count=len(subjects),
            )
            assert (got == expected).all(), f"pattern {pattern!r}"
            checked += len(subjects)
            if api_rng.random() < 0.01:  # spot-check the public API path
                i = api_rng.randrange(len(subjects))
                assert match_wildcard(pattern, subjects[i]) == bool(expected[i])
    assert checked == 19531 * 1093
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    report(f"wildcard matcher ({checked} pairs)", started)


def test_formula_engine():
    """1000 print/parse round trips, constant-equation folding, and
    fill-consistent relative shapes."""
    started = time.perf_counter()
    rng = random.Random(424242)
    host = parse_a1("C3", "Main")
    for _ in range(1000):
        ast, _ = gen_formula(rng, host)
        assert parse_formula(print_canonical(ast), host) == ast

    content = formula_content("=1+2+3")
    assert classify_content(content) == "constant-formula"
    folded = fold_constant(parse_formula("=1+2+3"))
    assert folded.numeric == 6 and folded.lexical == "6"

    b = parse_formula("=SUM(B11:B17)", parse_a1("B18", "S"))
    c = parse_formula("=SUM(C11:C17)", parse_a1("C18", "S"))
    assert relative_shape(b, parse_a1("B18", "S")) == relative_shape(c, parse_a1("C18", "S"))
    report("formula engine", started)


def test_reconstruction(fixture_workbook):
    """Revert+replay identity on the sample and on 100 generated edit
    scripts; the 21:55 checkpoint shows the widened-sums story mid-flight."""
    started = time.perf_counter()
    base = revert_all(fixture_workbook)
    last = fixture_workbook.changes[-1]
    assert replay_to(base, fixture_workbook, Checkpoint(record_id=last.id)).state() == current_state(fixture_workbook)

    snapshot = replay_to(base, fixture_workbook, Checkpoint(at=datetime(2003, 3, 28, 21, 55, 0)))
    sheet = snapshot.sheet("Cash Flow")
    e18 = sheet.cell(17, 4)
    assert e18.kind == "formula" and e18.formula_source == "=SUM(E11:E16)"
    a17 = sheet.cell(16, 0)
    assert a17.kind == "static" and a17.static_value.lexical == "Travel"

    rng = random.Random(1970)
    for case in range(100):
        runner = ScriptRunner(rng, allow_deletions=(case % 2 == 0))
        workbook = runner.run(rng.randrange(3, 22))
        rebuilt = replay_records(revert_all(workbook), workbook.changes)
        assert rebuilt.state() == current_state(workbook), f"case {case}"
    report("reconstruction", started)


def test_static_analyzer(fixture_workbook, data_dir):
    """SA1 on the constant sheet; SA4 at 21:55 exactly where row-17 data
    abuts a stale sum and nowhere else; SA7 equals cell enumeration."""
    started = time.perf_counter()
    constant = load_workbook(data_dir / "constant.ods")
    sa1 = [f for f in scan(constant) if f.check_id == "SA1-constant-equation"]
    assert [f.location() for f in sa1] == ["D4"]

    base = revert_all(fixture_workbook)
    snapshot = replay_to(base, fixture_workbook, Checkpoint(at=datetime(2003, 3, 28, 21, 55, 0)))
    sheet = snapshot.sheet("Cash Flow")
    sum_columns_with_row17_data = []
    for col in range(sheet.n_cols):
        formula_cell = sheet.cell(17, col)  # the sum row at this checkpoint
        if formula_cell.kind != "formula" or "SUM" not in formula_cell.formula_source:
            continue
        if not sheet.cell(16, col).is_empty:
            sum_columns_with_row17_data.append(col)
    sa4 = [f for f in scan(snapshot) if f.check_id == "SA4-range-boundary"]
    assert sorted(f.address.column for f in sa4) == sorted(sum_columns_with_row17_data)
    assert [f.location() for f in sa4] == ["N18"]
    assert all(f.address.row == 17 for f in sa4)

    from test_checks import grid_workbook

    rng = random.Random(2024)
    for _ in range(200):
        r1, r2 = sorted(rng.randrange(0, 20) for _ in range(2))
        c1, c2 = sorted(rng.randrange(0, 20) for _ in range(2))
        r3, r4 = sorted(rng.randrange(0, 20) for _ in range(2))
        c3, c4 = sorted(rng.randrange(0, 20) for _ in range(2))
        from sheetaudit.addresses import CellAddress

        a = f"{CellAddress('', c1, r1).a1()}:{CellAddress('', c2, r2).a1()}"
        b = f"{CellAddress('', c3, r3).a1()}:{CellAddress('', c4, r4).a1()}"
        wb = grid_workbook({"Z26": formula_content(f"=SUM({a})+SUM({b})")})
        sa7 = [f for f in scan(wb) if f.check_id == "SA7-overlapping-ranges"]
        expected = cells_of_range(a) & cells_of_range(b)
        if expected:
            assert len(sa7) == 1
            assert cells_of_range(sa7[0].evidence["intersection"]) == expected
        else:
            assert sa7 == []
    report("static analyzer", started)


def test_read_only_guarantee(fixture_path, data_dir, tmp_path):
    """SHA-256 of every input is unchanged after every CLI command and
    every service request."""
    started = time.perf_counter()
    inputs = [
        fixture_path,
        data_dir / "nohistory.ods",
        data_dir / "constant.ods",
        data_dir / "fixture.sxc",
    ]
    with unchanged(*inputs):
        run_cli("changes", str(fixture_path))
        run_cli("changes", str(fixture_path), "--filter", "-transition=empty->any")
        run_cli("changes", str(data_dir / "fixture.sxc"))
        run_cli("scan", str(fixture_path), "--at", "2003-03-28T21:55:00")
        run_cli("scan", str(data_dir / "constant.ods"))
        run_cli("summary", str(fixture_path))
        run_cli("verify", str(fixture_path))
        run_cli("verify", str(data_dir / "nohistory.ods"))
        run_cli("reconstruct", str(fixture_path), "--out", str(tmp_path / "snap"))
        run_cli("export-changes", str(fixture_path), "--out", str(tmp_path / "c.ndjson"))

        from fastapi.testclient import TestClient

        client = TestClient(create_app(root=fixture_path.parent))
        sid = client.post("/sessions", json={"path": fixture_path.name}).json()["session_id"]
        client.get(f"/sessions/{sid}/changes", params={"filter": "-transition=empty->any"})
        client.get(f"/sessions/{sid}/summary")
        client.get(f"/sessions/{sid}/findings", params={"at": "2003-03-28T21:55:00"})
        client.get(f"/sessions/{sid}/snapshot", params={"at": "2003-03-28T21:55:00"})
        client.get(f"/sessions/{sid}/timeline")
        client.post("/sessions", json={"path": "nohistory.ods"})
        client.post("/sessions", json={"path": "constant.ods"})
    report("read-only guarantee", started)


def test_service_consistency(data_dir):
    """/summary totals equal unfiltered /changes totals; path traversal
    attempts answer 404."""
    started = time.perf_counter()
    from fastapi.testclient import TestClient

    client = TestClient(create_app(root=data_dir))
    sid = client.post("/sessions", json={"path": "fixture.ods"}).json()["session_id"]
    summary = client.get(f"/sessions/{sid}/summary").json()["summary"]
    changes = client.get(f"/sessions/{sid}/changes").json()
    assert summary["total"] == len(changes["records"])
    assert summary == changes["summary"]
    for attempt in ("../outside.ods", "../../etc/passwd", "a/../../b.ods", "/etc/hosts"):
        assert client.post("/sessions", json={"path": attempt}).status_code == 404
    report("service consistency", started)
