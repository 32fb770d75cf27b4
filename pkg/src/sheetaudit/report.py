"""Text renderings: aligned tables, CSV, and newline-delimited JSON.

All three formats carry identical field values; table columns follow the
change-record panel layout (Change, Sheet, Address, Author, Date, Time,
Status, Change Details).
"""

from __future__ import annotations

import csv
import io
import json

from .checks import Finding
from .filters import Summary
from .model import (
    KIND_DISPLAY,
    ChangeRecord,
    record_to_json,
    render_change_detail,
)

CHANGE_COLUMNS = (
    "Change", "Sheet", "Address", "Author", "Date", "Time", "Status", "Change Details",
)
FINDING_COLUMNS = ("Check", "Severity", "Location", "Message")

FORMATS = ("table", "csv", "ndjson")


def change_row(record: ChangeRecord) -> list[str]:
    return [
        KIND_DISPLAY[record.kind],
        record.sheet,
        record.address_display(),
        record.author,
        record.timestamp.date().isoformat(),
        record.timestamp.time().isoformat(),
        record.state,
        render_change_detail(record),
    ]


def _table(header, rows) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [" | ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    lines.append("-+-".join("-" * w for w in widths))
    for row in rows:
        lines.append(
            " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def render_change_table(records: list[ChangeRecord], format: str = "table") -> str:
    if format == "table":
        return _table(CHANGE_COLUMNS, [change_row(r) for r in records])
    if format == "csv":
        return _csv(CHANGE_COLUMNS, [change_row(r) for r in records])
    if format == "ndjson":
        return "".join(
            json.dumps(record_to_json(r), ensure_ascii=False) + "\n" for r in records
        )
    raise ValueError(f"unknown format {format!r}")


def render_summary(summary: Summary) -> str:
    if summary.total == 0:
        return "0 Change Records\n"
    lines = [
        "%d Change Records between: %s and %s"
        % (summary.total, summary.min_date.isoformat(), summary.max_date.isoformat())
    ]
    lines.append("of Change Types: %d" % len(summary.by_kind))
    for kind, count in sorted(summary.by_kind.items(), key=lambda kv: -kv[1]):
        lines.append("  %d %s" % (count, KIND_DISPLAY[kind]))
    lines.append("of Authors: %d" % len(summary.by_author))
    for author, count in sorted(summary.by_author.items(), key=lambda kv: -kv[1]):
        lines.append('  %d by "%s"' % (count, author))
    lines.append("of Dates: %d" % len(summary.by_date))
    for day, count in sorted(summary.by_date.items()):
        lines.append('  %d on "%s"' % (count, day.isoformat()))
    return "\n".join(lines) + "\n"


def summary_to_json(summary: Summary) -> dict:
    return {
        "total": summary.total,
        "by_kind": dict(summary.by_kind),
        "by_author": dict(summary.by_author),
        "by_date": {d.isoformat(): n for d, n in summary.by_date.items()},
        "min_date": summary.min_date.isoformat() if summary.min_date else None,
        "max_date": summary.max_date.isoformat() if summary.max_date else None,
    }


def finding_location(finding: Finding, single_sheet: bool) -> str:
    if finding.address is None:
        return finding.sheet
    if single_sheet:
        return finding.address.a1()
    return f"{finding.sheet}!{finding.address.a1()}"


def finding_to_json(finding: Finding) -> dict:
    return {
        "check": finding.check_id,
        "severity": finding.severity,
        "sheet": finding.sheet,
        "address": finding.address.a1() if finding.address else None,
        "message": finding.message,
        "evidence": finding.evidence,
    }


def render_findings(findings: list[Finding], format: str = "table") -> str:
    sheets = {f.sheet for f in findings}
    single = len(sheets) <= 1
    rows = [
        [f.check_id, f.severity, finding_location(f, single), f.message]
        for f in findings
    ]
    if format == "table":
        return _table(FINDING_COLUMNS, rows)
    if format == "csv":
        return _csv(FINDING_COLUMNS, rows)
    if format == "ndjson":
        return "".join(
            json.dumps(finding_to_json(f), ensure_ascii=False) + "\n" for f in findings
        )
    raise ValueError(f"unknown format {format!r}")
