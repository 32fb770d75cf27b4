"""Run the static-check catalog over a document and over its past.

A clean-looking current grid can hide a window during the editing session
when a formula was wrong; scanning a reconstructed checkpoint shows it.
"""

import tempfile
from datetime import datetime
from pathlib import Path

from sheetaudit import load_workbook
from sheetaudit.checks import CheckConfig, scan
from sheetaudit.rebuild import Checkpoint, replay_to, revert_all
from sheetaudit.report import render_findings
from sheetaudit.sample import write_constant, write_fixture

scratch = Path(tempfile.mkdtemp(prefix="sheetaudit-demo-"))

# A constant equation: "=1+2+3" computes, but why is it a formula at all?
constant = load_workbook(write_constant(scratch / "constant.ods"))
print("constant.ods:")
print(render_findings(scan(constant)))

# The cash-flow sample is clean *today*...
workbook = load_workbook(write_fixture(scratch / "cashflow.ods"))
print("cashflow.ods, current grid:")
print(render_findings(scan(workbook)))

# ...but at 21:55 the Travel row existed while the per-column sums still
# read SUM(x11:x16): the N column already had data just beyond the range.
base = revert_all(workbook)
snapshot = replay_to(base, workbook, Checkpoint(at=datetime(2003, 3, 28, 21, 55, 0)))
print("cashflow.ods as of 2003-03-28 21:55:00:")
print(render_findings(scan(snapshot)))

# Checks are configurable: demand protection, deny a function category.
strict = CheckConfig(require_protection=True, deny_categories={"trigonometry"})
print("current grid under a strict profile:")
print(render_findings(scan(workbook, strict)))
