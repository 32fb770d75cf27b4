"""In-memory workbook: cell grids, protection flags, and the change log.

Change-record cell addresses are stored by the producing program in the
coordinate frame of the *current* document (it rewrites them when rows or
columns are inserted or deleted), so a record made before a row insertion
already shows the shifted address. Reconstruction relies on this.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Optional

from . import container as cj
from .addresses import CellAddress, Position, column_letters
from .errors import BadCellAddress
from .formulas import normalize_stored_formula
from .values import (
    EMPTY,
    CellContent,
    ErrorValue,
    StaticValue,
    formula as formula_content,
    looks_like_error,
    make_boolean,
    make_currency,
    make_date,
    make_float,
    make_percentage,
    make_string,
    render_content,
    static as static_content,
)

RECORD_KINDS = (
    "cell-content",
    "row-insertion",
    "row-deletion",
    "column-insertion",
    "column-deletion",
)

KIND_DISPLAY = {
    "cell-content": "Cell content",
    "row-insertion": "Insertion",
    "column-insertion": "Insertion",
    "row-deletion": "Deletion",
    "column-deletion": "Deletion",
}


@dataclass
class SheetGrid:
    """One sheet: sparse cell map plus protection flags.

    `cell_protection` holds only cells whose style says something
    explicit; anything else counts as unprotected.
    """

    name: str
    protected: bool = False
    cells: dict[tuple[int, int], CellContent] = field(default_factory=dict)
    cell_protection: dict[tuple[int, int], bool] = field(default_factory=dict)

    def cell(self, row: int, column: int) -> CellContent:
        return self.cells.get((row, column), EMPTY)

    def set_cell(self, row: int, column: int, content: CellContent) -> None:
        if content.is_empty:
            self.cells.pop((row, column), None)
        else:
            self.cells[(row, column)] = content

    @property
    def n_rows(self) -> int:
        return 1 + max((r for r, _ in self.cells), default=-1)

    @property
    def n_cols(self) -> int:
        return 1 + max((c for _, c in self.cells), default=-1)

    def copy(self) -> "SheetGrid":
        return SheetGrid(
            self.name, self.protected, dict(self.cells), dict(self.cell_protection)
        )


@dataclass(frozen=True)
class ChangeRecord:
    """One tracked change; before/after are empty placeholders for
    structural kinds."""

    id: str
    kind: str
    author: str
    timestamp: datetime
    state: str = "pending"
    address: Optional[CellAddress] = None
    position: Optional[Position] = None
    before: CellContent = EMPTY
    after: CellContent = EMPTY
    doc_index: int = 0

    def __post_init__(self):
        if self.kind not in RECORD_KINDS:
            raise ValueError(f"bad record kind {self.kind!r}")
        if self.kind == "cell-content":
            if self.address is None or self.position is not None:
                raise ValueError("cell-content records carry an address")
        else:
            if self.position is None or self.address is not None:
                raise ValueError("structural records carry a position")

    @property
    def order_key(self) -> tuple[datetime, int]:
        return (self.timestamp, self.doc_index)

    @property
    def sheet(self) -> str:
        return self.address.sheet if self.address else self.position.sheet

    def address_display(self) -> str:
        return self.address.a1() if self.address else self.position.display()


@dataclass(frozen=True)
class OpaqueChange:
    """A change element of a kind we do not replay (movement etc.)."""

    element: str
    id: str
    author: str
    timestamp: Optional[datetime]


@dataclass
class Workbook:
    sheets: list[SheetGrid]
    changes: list[ChangeRecord]
    recording_enabled: str  # "enabled" | "no-history-found"
    manifest: object = None
    opaque_changes: list[OpaqueChange] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)
    recording_setting: Optional[bool] = None

    def sheet(self, name: str) -> SheetGrid:
        for sheet in self.sheets:
            if sheet.name == name:
                return sheet
        raise KeyError(name)

    def sheet_names(self) -> list[str]:
        return [s.name for s in self.sheets]

    def cell(self, address: CellAddress) -> CellContent:
        return self.sheet(address.sheet).cell(address.row, address.column)


# ---------------------------------------------------------------------------
# Cell content from XML

def _static_from_cell(element: ET.Element) -> StaticValue | None:
    vtype = cj.attr(element, "value-type")
    if vtype is None:
        text = cj.text_content(element).strip()
        return make_string(text) if text else None
    if vtype == "float":
        return make_float(float(cj.attr(element, "value", "0")))
    if vtype == "currency":
        return make_currency(
            float(cj.attr(element, "value", "0")), cj.attr(element, "currency", "USD")
        )
    if vtype == "percentage":
        return make_percentage(float(cj.attr(element, "value", "0")))
    if vtype == "boolean":
        return make_boolean(cj.attr(element, "boolean-value", "false") == "true")
    if vtype == "date":
        return make_date(cj.attr(element, "date-value", ""))
    if vtype == "string":
        text = cj.attr(element, "string-value")
        if text is None:
            text = cj.text_content(element).strip()
        return make_string(text)
    # unknown typed value (e.g. time): keep its display text
    return make_string(cj.text_content(element).strip())


def cell_content_from_element(element: ET.Element) -> CellContent:
    """Content of a table-cell / change-track-table-cell element."""
    raw_formula = cj.attr(element, "formula")
    if raw_formula is not None:
        source = normalize_stored_formula(raw_formula)
        display = cj.text_content(element).strip()
        if display and looks_like_error(display):
            return formula_content(source, ErrorValue(display))
        return formula_content(source, _static_from_cell(element))
    value = _static_from_cell(element)
    return static_content(value) if value is not None else EMPTY


# ---------------------------------------------------------------------------
# Grid building

def _parse_styles(root: ET.Element) -> dict[str, bool]:
    """Map cell-style name -> explicit protection flag."""
    protection: dict[str, bool] = {}
    for styles in cj.children(root, "automatic-styles") + cj.children(root, "styles"):
        for style in cj.children(styles, "style"):
            if cj.attr(style, "family") != "table-cell":
                continue
            name = cj.attr(style, "name")
            for props in style:
                value = cj.attr(props, "cell-protect")
                if value is not None and name:
                    protection[name] = value != "none"
    return protection


def expand_row(row: ET.Element) -> list[tuple[ET.Element, CellContent]]:
    """Expand number-columns-repeated into one entry per cell.

    A trailing run of style-less empty cells is pure padding and is not
    materialized; everything else (including styled empties, which can
    carry protection) expands in full, conserving repeat counts.
    """
    out: list[tuple[ET.Element, CellContent]] = []
    elements = [
        el for el in row if cj.local(el.tag) in ("table-cell", "covered-table-cell")
    ]
    for index, el in enumerate(elements):
        repeat = int(cj.attr(el, "number-columns-repeated", "1"))
        if cj.local(el.tag) == "covered-table-cell":
            content = EMPTY
        else:
            content = cell_content_from_element(el)
        last = index == len(elements) - 1
        if content.is_empty and last and cj.attr(el, "style-name") is None:
            break
        out.extend([(el, content)] * repeat)
    return out


def _build_sheet(table: ET.Element, styles: dict[str, bool]) -> SheetGrid:
    sheet = SheetGrid(
        name=cj.attr(table, "name", ""),
        protected=cj.attr(table, "protected", "false") == "true",
    )
    row_index = 0
    for row in cj.children(table, "table-row"):
        repeat = int(cj.attr(row, "number-rows-repeated", "1"))
        expanded = expand_row(row)
        if expanded:
            for r in range(row_index, row_index + repeat):
                for c, (el, content) in enumerate(expanded):
                    sheet.set_cell(r, c, content)
                    style = cj.attr(el, "style-name")
                    if style in styles:
                        sheet.cell_protection[(r, c)] = styles[style]
        row_index += repeat
    return sheet


# ---------------------------------------------------------------------------
# Change log

def _parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1]
    return datetime.fromisoformat(text)


def _change_info(element: ET.Element) -> tuple[str, Optional[datetime]]:
    info = cj.find(element, "change-info")
    author, stamp = "", None
    if info is not None:
        creator = cj.find(info, "creator")
        date = cj.find(info, "date")
        if creator is not None and creator.text:
            author = creator.text.strip()
        if date is not None and date.text:
            stamp = _parse_timestamp(date.text)
    return author, stamp


def _sheet_name(index_text: str, sheets: list[SheetGrid], record_id: str) -> str:
    try:
        index = int(index_text)
    except ValueError as exc:
        raise BadCellAddress(f"record {record_id}: bad sheet index {index_text!r}") from exc
    if not 0 <= index < len(sheets):
        raise BadCellAddress(f"record {record_id}: sheet index {index} out of range")
    return sheets[index].name


def _parse_cell_change(el: ET.Element, sheets, doc_index: int) -> ChangeRecord:
    record_id = cj.attr(el, "id", f"ct{doc_index}")
    state = cj.attr(el, "acceptance-state", "pending")
    addr_el = cj.find(el, "cell-address")
    if addr_el is None:
        raise BadCellAddress(f"record {record_id}: no cell-address")
    sheet = _sheet_name(cj.attr(addr_el, "table", "0"), sheets, record_id)
    row = int(cj.attr(addr_el, "row", "-1"))
    column = int(cj.attr(addr_el, "column", "-1"))
    if row < 0 or column < 0:
        raise BadCellAddress(f"record {record_id}: bad row/column")
    author, stamp = _change_info(el)
    before = EMPTY
    previous = cj.find(el, "previous")
    if previous is not None:
        tracked = cj.find(previous, "change-track-table-cell")
        if tracked is not None:
            before = cell_content_from_element(tracked)
    return ChangeRecord(
        id=record_id,
        kind="cell-content",
        author=author,
        timestamp=stamp or datetime.min,
        state=state,
        address=CellAddress(sheet, column, row),
        before=before,
        doc_index=doc_index,
    )


def _parse_structural(el: ET.Element, sheets, doc_index: int, deletion: bool):
    record_id = cj.attr(el, "id", f"ct{doc_index}")
    axis = cj.attr(el, "type", "")
    if axis not in ("row", "column"):
        return None  # table insertions/deletions are preserved opaquely
    state = cj.attr(el, "acceptance-state", "pending")
    sheet = _sheet_name(cj.attr(el, "table", "0"), sheets, record_id)
    author, stamp = _change_info(el)
    position = Position(
        sheet=sheet,
        axis=axis,
        index=int(cj.attr(el, "position", "0")),
        count=int(cj.attr(el, "count", "1")),
    )
    kind = f"{axis}-{'deletion' if deletion else 'insertion'}"
    return ChangeRecord(
        id=record_id,
        kind=kind,
        author=author,
        timestamp=stamp or datetime.min,
        state=state,
        position=position,
        doc_index=doc_index,
    )


def resolve_after_content(workbook: Workbook, record: ChangeRecord) -> CellContent:
    """Y of "changed from X to Y": the before-content of the next record
    at the same address, or the current grid content when none follows."""
    if record.kind != "cell-content":
        raise ValueError("after-content is defined for cell-content records only")
    key = record.address.key()
    for other in workbook.changes:
        if (
            other.kind == "cell-content"
            and other.address.key() == key
            and other.order_key > record.order_key
        ):
            return other.before
    return workbook.cell(record.address)


def build_workbook(
    content: ET.Element,
    settings: ET.Element | None = None,
    manifest=None,
) -> Workbook:
    """Materialize the workbook: grids, protection, sorted change log."""
    styles = _parse_styles(content)
    body = cj.find(content, "body")
    spreadsheet = content if body is None else body
    inner = cj.find(spreadsheet, "spreadsheet")
    if inner is not None:
        spreadsheet = inner
    sheets = [_build_sheet(t, styles) for t in cj.children(spreadsheet, "table")]

    tracked = None
    for el in spreadsheet.iter():
        if cj.local(el.tag) == "tracked-changes":
            tracked = el
            break

    workbook = Workbook(
        sheets=sheets,
        changes=[],
        recording_enabled="enabled" if tracked is not None else "no-history-found",
        manifest=manifest,
        recording_setting=_recording_setting(settings),
    )
    if tracked is None:
        return workbook

    records: list[ChangeRecord] = []
    for doc_index, el in enumerate(tracked):
        name = cj.local(el.tag)
        if name == "cell-content-change":
            records.append(_parse_cell_change(el, sheets, doc_index))
        elif name in ("insertion", "deletion"):
            record = _parse_structural(el, sheets, doc_index, name == "deletion")
            if record is not None:
                records.append(record)
                continue
            _note_opaque(workbook, el, doc_index)
        else:
            _note_opaque(workbook, el, doc_index)

    records.sort(key=lambda r: r.order_key)
    workbook.changes = records
    by_key: dict[tuple, list[int]] = {}
    for i, r in enumerate(records):
        if r.kind == "cell-content":
            by_key.setdefault(r.address.key(), []).append(i)
    resolved = list(records)
    for indexes in by_key.values():
        for j, i in enumerate(indexes):
            if j + 1 < len(indexes):
                after = records[indexes[j + 1]].before
            else:
                after = workbook.cell(records[i].address)
            resolved[i] = replace(records[i], after=after)
    workbook.changes = resolved
    return workbook


def _note_opaque(workbook: Workbook, el: ET.Element, doc_index: int) -> None:
    name = cj.local(el.tag)
    record_id = cj.attr(el, "id", f"ct{doc_index}")
    author, stamp = _change_info(el)
    workbook.opaque_changes.append(OpaqueChange(name, record_id, author, stamp))
    workbook.notices.append(
        f"unsupported change kind '{name}' (id {record_id}) preserved as an opaque entry"
    )


def _recording_setting(settings: ET.Element | None) -> Optional[bool]:
    if settings is None:
        return None
    for el in settings.iter():
        if cj.local(el.tag) == "config-item" and cj.attr(el, "name") == "RecordChanges":
            return (el.text or "").strip().lower() == "true"
    return None


# ---------------------------------------------------------------------------
# Rendering and serialization

def render_change_detail(record: ChangeRecord) -> str:
    """Canonical one-line Change Details text (see Workbook docs)."""
    if record.kind == "cell-content":
        return f"{render_content(record.before)} -> {render_content(record.after)}"
    pos = record.position
    unit = pos.axis if pos.count == 1 else pos.axis + "s"
    where = f"row {pos.index + 1}" if pos.axis == "row" else f"column {column_letters(pos.index)}"
    if record.kind.endswith("insertion"):
        return f"{pos.count} {unit} at {where}"
    return f"{pos.count} {unit} deleted at {where}"


def content_to_json(content: CellContent) -> dict:
    if content.kind == "empty":
        return {"kind": "empty"}
    if content.kind == "static":
        v = content.static_value
        out = {"kind": "static", "type": v.value_type, "lexical": v.lexical}
        if v.numeric is not None:
            out["numeric"] = v.numeric
        if v.currency_code is not None:
            out["currency"] = v.currency_code
        return out
    out = {"kind": "formula", "formula": content.formula_source}
    cached = content.cached_result
    if isinstance(cached, ErrorValue):
        out["cached"] = {"type": "error", "token": cached.token}
    elif cached is not None:
        entry = {"type": cached.value_type, "lexical": cached.lexical}
        if cached.numeric is not None:
            entry["numeric"] = cached.numeric
        if cached.currency_code is not None:
            entry["currency"] = cached.currency_code
        out["cached"] = entry
    return out


def _static_from_json(data: dict) -> StaticValue:
    return StaticValue(
        data["type"], data["lexical"], data.get("numeric"), data.get("currency")
    )


def content_from_json(data: dict) -> CellContent:
    kind = data["kind"]
    if kind == "empty":
        return EMPTY
    if kind == "static":
        return static_content(_static_from_json(data))
    cached = data.get("cached")
    if cached is None:
        result = None
    elif cached.get("type") == "error":
        result = ErrorValue(cached["token"])
    else:
        result = _static_from_json(cached)
    return formula_content(data["formula"], result)


def record_to_json(record: ChangeRecord) -> dict:
    out = {
        "id": record.id,
        "kind": record.kind,
        "sheet": record.sheet,
    }
    if record.kind == "cell-content":
        out["address"] = record.address.a1()
    else:
        out["position"] = {
            "axis": record.position.axis,
            "index": record.position.index,
            "count": record.position.count,
        }
    out.update(
        {
            "author": record.author,
            "timestamp": record.timestamp.isoformat(),
            "state": record.state,
            "before": content_to_json(record.before),
            "after": content_to_json(record.after),
            "detail": render_change_detail(record),
        }
    )
    return out


def record_from_json(data: dict, doc_index: int = 0) -> ChangeRecord:
    from .addresses import parse_a1

    kind = data["kind"]
    address = position = None
    if kind == "cell-content":
        address = parse_a1(data["address"], sheet=data["sheet"])
    else:
        pos = data["position"]
        position = Position(data["sheet"], pos["axis"], pos["index"], pos["count"])
    return ChangeRecord(
        id=data["id"],
        kind=kind,
        author=data["author"],
        timestamp=datetime.fromisoformat(data["timestamp"]),
        state=data["state"],
        address=address,
        position=position,
        before=content_from_json(data["before"]),
        after=content_from_json(data["after"]),
        doc_index=doc_index,
    )
