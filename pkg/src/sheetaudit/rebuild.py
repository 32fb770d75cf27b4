"""Rebuild the spreadsheet at any checkpoint from its change log.

Stored record addresses live in the current document's coordinate frame
(see model docs). Replaying therefore keeps a pullback transform: while
structural records are still in the future, a stored address is shifted
back through each of them before touching the grid; applying a structural
record shifts the grid itself and retires the transform.

Deletions cannot restore what they removed: undoing one re-inserts blank
rows or columns that the snapshot marks as unrecoverable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Optional

from .errors import BadCellAddress, CheckpointNotFound, UnreplayableRecord
from .model import ChangeRecord, SheetGrid, Workbook, record_from_json, record_to_json


@dataclass(frozen=True)
class Checkpoint:
    """An inclusive upper bound: an instant, or a record id (ties at one
    timestamp include records up to and including the named one)."""

    at: Optional[datetime] = None
    record_id: Optional[str] = None

    def __post_init__(self):
        if (self.at is None) == (self.record_id is None):
            raise ValueError("checkpoint needs exactly one of at/record_id")


def parse_checkpoint(text: str) -> Checkpoint:
    """An ISO date-time, or anything else as a record id."""
    try:
        return Checkpoint(at=datetime.fromisoformat(text.strip()))
    except ValueError:
        return Checkpoint(record_id=text.strip())


@dataclass
class GridSnapshot:
    sheets: list[SheetGrid]
    as_of: Optional[datetime]
    applied_count: int
    # (sheet name, axis, index) of blank rows/columns standing in for
    # deleted content that the log does not preserve
    unrecoverable: set = field(default_factory=set)

    def sheet(self, name: str) -> SheetGrid:
        for sheet in self.sheets:
            if sheet.name == name:
                return sheet
        raise KeyError(name)

    def state(self) -> dict[str, dict]:
        return {s.name: dict(s.cells) for s in self.sheets}


def current_state(workbook: Workbook) -> dict[str, dict]:
    return {s.name: dict(s.cells) for s in workbook.sheets}


# ---------------------------------------------------------------------------
# Structural shifting
#
# Stored positions of structural records are themselves kept current by the
# producing program, so an op's position must be pulled back through every
# newer structural op before the op can be applied or undone. _OpFrame
# resolves those at-time positions once per change list.


def _inverse_shift(kind: str, p: int, count: int, index: int, owner: str) -> int:
    if kind.endswith("insertion"):
        if p <= index < p + count:
            raise BadCellAddress(
                f"{owner} lies inside a row/column block that was created later"
            )
        return index - count if index >= p + count else index
    return index + count if index >= p else index  # deletion


@dataclass(frozen=True)
class _Op:
    record: ChangeRecord
    index: int  # position in the op's own at-time frame

    @property
    def sheet(self) -> str:
        return self.record.position.sheet

    @property
    def axis(self) -> str:
        return self.record.position.axis

    @property
    def count(self) -> int:
        return self.record.position.count


def _resolve_ops(records: list[ChangeRecord]) -> list[_Op]:
    """At-time positions for every effective structural record,
    chronological order."""
    ops = [r for r in records if r.kind != "cell-content" and _effective(r)]
    resolved_newest_first: list[_Op] = []
    for record in reversed(ops):
        index = record.position.index
        for newer in resolved_newest_first:
            if newer.sheet == record.position.sheet and newer.axis == record.position.axis:
                index = _inverse_shift(
                    newer.record.kind, newer.index, newer.count, index,
                    owner=f"record {record.id}",
                )
        resolved_newest_first.append(_Op(record, index))
    return list(reversed(resolved_newest_first))


def _pullback(record: ChangeRecord, pending: list[_Op]) -> tuple[int, int]:
    """Map a stored (row, column) back through every not-yet-applied
    structural op, newest first."""
    row, column = record.address.row, record.address.column
    for op in reversed(pending):
        if op.sheet != record.address.sheet:
            continue
        index = row if op.axis == "row" else column
        index = _inverse_shift(
            op.record.kind, op.index, op.count, index, owner=f"record {record.id}"
        )
        if op.axis == "row":
            row = index
        else:
            column = index
    return row, column


def _shift_cells(sheet: SheetGrid, axis: str, start: int, delta: int) -> None:
    """Shift all cells at/after `start` on one axis by `delta`; cells that
    fall into [start+delta, start) under a negative delta are dropped."""

    def move(mapping: dict) -> dict:
        out = {}
        for (r, c), value in mapping.items():
            index = r if axis == "row" else c
            if delta < 0 and start + delta <= index < start:
                continue
            if index >= start:
                index += delta
            out[(index, c) if axis == "row" else (r, index)] = value
        return out

    sheet.cells = move(sheet.cells)
    sheet.cell_protection = move(sheet.cell_protection)


def _apply_structural(sheet: SheetGrid, op: _Op, marks: set, forward: bool):
    index, count, axis = op.index, op.count, op.axis
    inserting = op.record.kind.endswith("insertion")
    if not forward:
        inserting = not inserting
    if inserting:
        _shift_cells(sheet, axis, index, count)
        _shift_marks(marks, sheet.name, axis, index, count)
        if not forward:
            # a deletion undone: blank lanes whose content was not preserved
            for i in range(index, index + count):
                marks.add((sheet.name, axis, i))
    else:
        for i in range(index, index + count):
            marks.discard((sheet.name, axis, i))
        _shift_cells(sheet, axis, index + count, -count)
        _shift_marks(marks, sheet.name, axis, index + count, -count)


def _shift_marks(marks: set, sheet_name: str, axis: str, start: int, delta: int):
    moved = set()
    for mark in marks:
        name, m_axis, index = mark
        if name == sheet_name and m_axis == axis and index >= start:
            moved.add((name, m_axis, index + delta))
        else:
            moved.add(mark)
    marks.clear()
    marks.update(moved)


# ---------------------------------------------------------------------------
# Revert and replay

def _effective(record: ChangeRecord) -> bool:
    # rejected changes never took effect in the document
    return record.state != "rejected"


def revert_all(workbook: Workbook) -> GridSnapshot:
    """Undo the whole log, newest first, yielding the base document."""
    if workbook.opaque_changes:
        newest = max(
            workbook.opaque_changes,
            key=lambda o: (o.timestamp or datetime.min),
        )
        raise UnreplayableRecord(newest.id, newest.element, newest.timestamp)
    sheets = [sheet.copy() for sheet in workbook.sheets]
    by_name = {sheet.name: sheet for sheet in sheets}
    marks: set = set()
    ops = {op.record.doc_index: op for op in _resolve_ops(workbook.changes)}
    pending: list[_Op] = []
    for record in reversed(workbook.changes):
        if not _effective(record):
            continue
        if record.kind == "cell-content":
            sheet = by_name[record.address.sheet]
            row, column = _pullback(record, pending)
            sheet.set_cell(row, column, record.before)
        else:
            op = ops[record.doc_index]
            _apply_structural(by_name[op.sheet], op, marks, forward=False)
            pending.insert(0, op)
    return GridSnapshot(sheets=sheets, as_of=None, applied_count=0, unrecoverable=marks)


def _checkpoint_bound(workbook_changes: list[ChangeRecord], checkpoint: Checkpoint):
    if checkpoint.at is not None:
        return checkpoint.at, lambda r: r.timestamp <= checkpoint.at
    for record in workbook_changes:
        if record.id == checkpoint.record_id:
            bound = record.order_key
            return record.timestamp, lambda r: r.order_key <= bound
    raise CheckpointNotFound(f"no record with id {checkpoint.record_id!r}")


def replay_records(
    base: GridSnapshot,
    records: list[ChangeRecord],
    checkpoint: Checkpoint | None = None,
) -> GridSnapshot:
    """Apply a change stream to a base snapshot, oldest first, stopping
    after the checkpoint (or replaying everything)."""
    if checkpoint is None:
        as_of = records[-1].timestamp if records else None
        included = lambda r: True
    else:
        as_of, included = _checkpoint_bound(records, checkpoint)
    sheets = [sheet.copy() for sheet in base.sheets]
    by_name = {sheet.name: sheet for sheet in sheets}
    marks = set(base.unrecoverable)
    pending = _resolve_ops(records)
    applied = 0
    for record in records:
        if not included(record):
            break
        applied += 1
        if not _effective(record):
            continue
        if record.kind == "cell-content":
            sheet = by_name[record.address.sheet]
            row, column = _pullback(record, pending)
            sheet.set_cell(row, column, record.after)
        else:
            op = pending.pop(0)
            assert op.record is record
            _apply_structural(by_name[op.sheet], op, marks, forward=True)
    return GridSnapshot(
        sheets=sheets, as_of=as_of, applied_count=applied, unrecoverable=marks
    )


def replay_to(base: GridSnapshot, workbook: Workbook, checkpoint: Checkpoint) -> GridSnapshot:
    """Rebuild the grid as of `checkpoint` from the reverted base."""
    return replay_records(base, workbook.changes, checkpoint)


# ---------------------------------------------------------------------------
# The changes file (newline-delimited record stream)

def export_changes_file(workbook: Workbook, path: Path | str) -> int:
    """One JSON object per change, chronological, resolved after-content
    included, fixed key order. Returns the record count."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for record in workbook.changes:
            fh.write(json.dumps(record_to_json(record), ensure_ascii=False))
            fh.write("\n")
    return len(workbook.changes)


def import_changes_file(path: Path | str) -> list[ChangeRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for index, line in enumerate(fh):
            line = line.strip()
            if line:
                records.append(record_from_json(json.loads(line), doc_index=index))
    return records
