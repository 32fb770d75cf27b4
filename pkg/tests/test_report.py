from __future__ import annotations

import csv
import io
import json
import re
from datetime import date

from sheetaudit.checks import CheckConfig, scan
from sheetaudit.filters import Summary, summarize
from sheetaudit.model import record_from_json
from sheetaudit.report import (
    CHANGE_COLUMNS,
    render_change_table,
    render_findings,
    render_summary,
)
from sheetaudit.values import formula, make_float
from test_checks import grid_workbook


def squeeze(line: str) -> str:
    return re.sub(r"\s+", " ", line).strip()


def test_table_header_and_k22_row(fixture_workbook):
    text = render_change_table(fixture_workbook.changes, "table")
    lines = text.splitlines()
    assert squeeze(lines[0]) == "Change | Sheet | Address | Author | Date | Time | Status | Change Details"
    k22 = next(l for l in lines if "| K22" in l)
    assert squeeze(k22) == (
        "Cell content | Cash Flow | K22 | Neil Smith | 2003-03-28 | 21:51:18 | "
        "pending | <empty> -> =K8-K18-K20 {$5,150 (currency)}"
    )
    insertion = next(l for l in lines if "Insertion" in l)
    assert squeeze(insertion).endswith("pending | 1 row at row 17")


def test_empty_table_is_header_only(fixture_workbook):
    for format in ("table", "csv"):
        text = render_change_table([], format)
        rows = [l for l in text.splitlines() if l and not set(l) <= set("-+| ")]
        assert len(rows) == 1
    assert render_change_table([], "ndjson") == ""


def test_csv_parses_back(fixture_workbook):
    text = render_change_table(fixture_workbook.changes, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(CHANGE_COLUMNS)
    assert len(rows) == 24
    k22 = next(r for r in rows if r[2] == "K22")
    assert k22 == [
        "Cell content",
        "Cash Flow",
        "K22",
        "Neil Smith",
        "2003-03-28",
        "21:51:18",
        "pending",
        "<empty> -> =K8-K18-K20 {$5,150 (currency)}",
    ]


def test_three_formats_carry_identical_values(fixture_workbook):
    records = fixture_workbook.changes
    table_lines = render_change_table(records, "table").splitlines()[2:]
    csv_rows = list(csv.reader(io.StringIO(render_change_table(records, "csv"))))[1:]
    nd_lines = render_change_table(records, "ndjson").splitlines()
    assert len(table_lines) == len(csv_rows) == len(nd_lines) == 23
    for line, row, nd in zip(table_lines, csv_rows, nd_lines):
        data = json.loads(nd)
        assert squeeze(line) == squeeze(" | ".join(row))
        assert row[3] == data["author"]
        assert row[7] == data["detail"]
        assert f"{row[4]}T{row[5]}" == data["timestamp"]


def test_ndjson_parses_back_to_records(fixture_workbook):
    nd_lines = render_change_table(fixture_workbook.changes, "ndjson").splitlines()
    parsed = [
        record_from_json(json.loads(line), doc_index=r.doc_index)
        for line, r in zip(nd_lines, fixture_workbook.changes)
    ]
    assert parsed == fixture_workbook.changes


def test_summary_rendering(fixture_workbook):
    text = render_summary(summarize(fixture_workbook.changes))
    lines = text.splitlines()
    assert lines[0] == "23 Change Records between: 2003-03-28 and 2003-03-28"
    assert "of Change Types: 2" in lines
    assert "  22 Cell content" in lines
    assert "  1 Insertion" in lines
    assert "of Authors: 1" in lines
    assert '  23 by "Neil Smith"' in lines
    assert "of Dates: 1" in lines
    assert '  23 on "2003-03-28"' in lines


def test_summary_header_format_contract():
    """The header format scales to the full-size change log."""
    summary = Summary(
        total=187,
        by_kind={"cell-content": 182, "row-insertion": 5},
        by_author={"Neil Smith": 187},
        by_date={date(2003, 3, 28): 187},
        min_date=date(2003, 3, 28),
        max_date=date(2003, 3, 28),
    )
    header = render_summary(summary).splitlines()[0]
    assert header == "187 Change Records between: 2003-03-28 and 2003-03-28"


def test_summary_of_zero_records():
    assert render_summary(summarize([])) == "0 Change Records\n"


def test_findings_rendering():
    wb = grid_workbook({"D4": formula("=1+2+3", make_float(6))})
    findings = scan(wb, CheckConfig())
    table = render_findings(findings, "table")
    row = squeeze(table.splitlines()[2])
    assert row == "SA1-constant-equation | info | D4 | constant formula evaluates to 6"
    nd = [json.loads(l) for l in render_findings(findings, "ndjson").splitlines()]
    assert nd == [
        {
            "check": "SA1-constant-equation",
            "severity": "info",
            "sheet": "S",
            "address": "D4",
            "message": "constant formula evaluates to 6",
            "evidence": {"formula": "=1+2+3", "value": "6"},
        }
    ]
    assert render_findings([], "table").splitlines()[0].startswith("Check")
    csv_rows = list(csv.reader(io.StringIO(render_findings(findings, "csv"))))
    assert csv_rows[1][2] == "D4"


def test_finding_location_qualified_on_multisheet():
    from sheetaudit.model import SheetGrid, Workbook
    from sheetaudit.addresses import parse_a1

    first = SheetGrid("One")
    second = SheetGrid("Two")
    a = parse_a1("A1")
    first.cells[(0, 0)] = formula("=1+2")
    second.cells[(0, 0)] = formula("=2+3")
    wb = Workbook(sheets=[first, second], changes=[], recording_enabled="no-history-found")
    table = render_findings(scan(wb), "table")
    assert "One!A1" in table and "Two!A1" in table
