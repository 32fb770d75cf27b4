"""Walk the change log of a spreadsheet with tracked changes.

Creates the bundled cash-flow sample in a scratch directory, loads it
read-only, and prints the change-record panel and its summary footer.
"""

import tempfile
from pathlib import Path

from sheetaudit import load_workbook, summarize
from sheetaudit.report import render_change_table, render_summary
from sheetaudit.sample import write_fixture

scratch = Path(tempfile.mkdtemp(prefix="sheetaudit-demo-"))
path = write_fixture(scratch / "cashflow.ods")
print(f"sample written to {path}\n")

workbook = load_workbook(path)
print(f"change recording: {workbook.recording_enabled}")
print(f"source digest:    sha256:{workbook.manifest.source_digest[:16]}...\n")

# Every tracked change: who, when, and what-from-what. The Change Details
# column reads "<before> -> <after> {result (type)}".
print(render_change_table(workbook.changes))

# The footer aggregates by kind, author, and calendar date.
print(render_summary(summarize(workbook.changes)))

# Each record also resolves its after-content: the file only stores the
# previous content, so "what it became" comes from the next change at the
# same address, or from today's grid.
e18_first = next(
    r
    for r in workbook.changes
    if r.kind == "cell-content" and r.address.a1() == "E18"
)
print(f"E18 was first set to {e18_first.after.formula_source}")
print(f"and the grid now holds {workbook.cell(e18_first.address).formula_source}")
