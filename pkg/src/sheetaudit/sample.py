"""Generate small spreadsheet containers for demos and tests.

The flagship sample is a one-sheet cash-flow projection whose change log
tells a short editing story: column totals filled in, a "Travel" expense
row inserted mid-sheet, the per-column sums widened to cover it, and one
suspicious static amount typed over a blank cell. Both the ODF 1.x and
the OpenOffice-1.0 namespace families can be emitted.

This module only creates new files; the audit tool itself never writes
into a file it reads.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from .addresses import parse_a1
from .values import (
    CellContent,
    EMPTY,
    ErrorValue,
    formula,
    make_currency,
    make_float,
    make_string,
    static,
)

NAMESPACES = {
    "odf": {
        "office": "urn:oasis:names:tc:opendocument:xmlns:office:1.0",
        "table": "urn:oasis:names:tc:opendocument:xmlns:table:1.0",
        "text": "urn:oasis:names:tc:opendocument:xmlns:text:1.0",
        "style": "urn:oasis:names:tc:opendocument:xmlns:style:1.0",
        "config": "urn:oasis:names:tc:opendocument:xmlns:config:1.0",
        "dc": "http://purl.org/dc/elements/1.1/",
    },
    "openoffice1": {
        "office": "http://openoffice.org/2000/office",
        "table": "http://openoffice.org/2000/table",
        "text": "http://openoffice.org/2000/text",
        "style": "http://openoffice.org/2000/style",
        "config": "http://openoffice.org/2001/config",
        "dc": "http://purl.org/dc/elements/1.1/",
    },
}

MIMETYPE = "application/vnd.oasis.opendocument.spreadsheet"


@dataclass
class SheetSpec:
    name: str
    cells: dict[str, CellContent] = field(default_factory=dict)
    protected: bool = False
    # a1 -> explicit cell protection flag (rendered as a cell style)
    cell_protection: dict[str, bool] = field(default_factory=dict)


def _q(ns: dict, prefix: str, name: str) -> str:
    return "{%s}%s" % (ns[prefix], name)


class _ContentWriter:
    def __init__(self, ns: dict):
        self.ns = ns

    def el(self, prefix: str, name: str, parent=None, **attrs) -> ET.Element:
        node = ET.Element(_q(self.ns, prefix, name))
        for key, value in attrs.items():
            ap, an = key.split("__")
            node.set(_q(self.ns, ap, an.replace("_", "-")), value)
        if parent is not None:
            parent.append(node)
        return node

    def _number(self, value: float) -> str:
        return str(int(value)) if value == int(value) else repr(float(value))

    def fill_cell(self, cell: ET.Element, content: CellContent) -> None:
        text = None
        if content.kind == "formula":
            cell.set(_q(self.ns, "table", "formula"), content.formula_source)
            cached = content.cached_result
            if isinstance(cached, ErrorValue):
                cell.set(_q(self.ns, "office", "value-type"), "string")
                text = cached.token
            elif cached is not None:
                self._set_value(cell, cached)
                text = cached.lexical
        elif content.kind == "static":
            self._set_value(cell, content.static_value)
            text = content.static_value.lexical
        if text:
            p = self.el("text", "p", cell)
            p.text = text

    def _set_value(self, cell: ET.Element, value) -> None:
        set_a = lambda n, v: cell.set(_q(self.ns, "office", n), v)
        set_a("value-type", value.value_type)
        if value.value_type in ("float", "percentage"):
            set_a("value", self._number(value.numeric))
        elif value.value_type == "currency":
            set_a("value", self._number(value.numeric))
            set_a("currency", value.currency_code or "USD")
        elif value.value_type == "boolean":
            set_a("boolean-value", "true" if value.lexical == "TRUE" else "false")
        elif value.value_type == "date":
            set_a("date-value", value.lexical)
        else:
            cell.set(_q(self.ns, "office", "string-value"), value.lexical)

    def sheet(self, parent: ET.Element, spec: SheetSpec, styles: dict[str, str]):
        table = self.el("table", "table", parent, table__name=spec.name)
        if spec.protected:
            table.set(_q(self.ns, "table", "protected"), "true")
        cells: dict[tuple[int, int], CellContent] = {}
        cell_styles: dict[tuple[int, int], str] = {}
        for a1, content in spec.cells.items():
            addr = parse_a1(a1)
            cells[(addr.row, addr.column)] = content
        for a1, protect in spec.cell_protection.items():
            addr = parse_a1(a1)
            cell_styles[(addr.row, addr.column)] = styles[
                "protected" if protect else "unprotected"
            ]
        n_rows = 1 + max((r for r, _ in list(cells) + list(cell_styles)), default=-1)
        for r in range(n_rows):
            row = self.el("table", "table-row", table)
            row_cells = {
                c: content for (rr, c), content in cells.items() if rr == r
            }
            n_cols = 1 + max(
                [c for c in row_cells]
                + [c for (rr, c) in cell_styles if rr == r] or [-1]
            )
            empty_run = 0
            for c in range(n_cols):
                content = row_cells.get(c, EMPTY)
                style = cell_styles.get((r, c))
                if content.is_empty and style is None:
                    empty_run += 1
                    continue
                if empty_run:
                    gap = self.el("table", "table-cell", row)
                    if empty_run > 1:
                        gap.set(
                            _q(self.ns, "table", "number-columns-repeated"),
                            str(empty_run),
                        )
                    empty_run = 0
                cell = self.el("table", "table-cell", row)
                if style:
                    cell.set(_q(self.ns, "table", "style-name"), style)
                self.fill_cell(cell, content)

    def change_info(self, parent: ET.Element, author: str, date: str) -> None:
        info = self.el("office", "change-info", parent)
        creator = self.el("dc", "creator", info)
        creator.text = author
        when = self.el("dc", "date", info)
        when.text = date

    def change(self, parent: ET.Element, spec: dict) -> None:
        kind = spec["kind"]
        if kind == "cell-content":
            el = self.el("table", "cell-content-change", parent)
        elif kind.endswith("insertion"):
            el = self.el("table", "insertion", parent)
        elif kind.endswith("deletion"):
            el = self.el("table", "deletion", parent)
        else:
            el = self.el("table", kind, parent)  # movement, rejection, ...
        el.set(_q(self.ns, "table", "id"), spec["id"])
        el.set(_q(self.ns, "table", "acceptance-state"), spec.get("state", "pending"))
        if kind == "cell-content":
            addr = parse_a1(spec["a1"])
            self.el(
                "table",
                "cell-address",
                el,
                table__table=str(spec.get("sheet", 0)),
                table__row=str(addr.row),
                table__column=str(addr.column),
            )
        elif kind != "movement" and kind != "rejection":
            el.set(_q(self.ns, "table", "type"), kind.split("-")[0])
            el.set(_q(self.ns, "table", "position"), str(spec["position"]))
            el.set(_q(self.ns, "table", "count"), str(spec.get("count", 1)))
            el.set(_q(self.ns, "table", "table"), str(spec.get("sheet", 0)))
        self.change_info(el, spec["author"], spec["date"])
        before = spec.get("before", EMPTY)
        if kind == "cell-content":
            previous = self.el("table", "previous", el)
            tracked = self.el("table", "change-track-table-cell", previous)
            self.fill_cell(tracked, before)


def _content_xml(sheets: list[SheetSpec], changes: list[dict] | None, ns: dict) -> bytes:
    w = _ContentWriter(ns)
    root = w.el("office", "document-content")
    styles_el = w.el("office", "automatic-styles", root)
    styles = {"protected": "ceP", "unprotected": "ceU"}
    for key, value in (("ceP", "protected"), ("ceU", "none")):
        style = w.el("style", "style", styles_el, style__name=key)
        style.set(_q(ns, "style", "family"), "table-cell")
        props = w.el("style", "table-cell-properties", style)
        props.set(_q(ns, "style", "cell-protect"), value)
    body = w.el("office", "body", root)
    spreadsheet = w.el("office", "spreadsheet", body)
    if changes is not None:
        tracked = w.el("table", "tracked-changes", spreadsheet)
        for spec in changes:
            w.change(tracked, spec)
    for sheet in sheets:
        w.sheet(spreadsheet, sheet, styles)
    return ET.tostring(root, xml_declaration=True, encoding="utf-8")


def _settings_xml(ns: dict, record_changes: bool) -> bytes:
    w = _ContentWriter(ns)
    root = w.el("office", "document-settings")
    settings = w.el("office", "settings", root)
    item_set = w.el("config", "config-item-set", settings)
    item_set.set(_q(ns, "config", "name"), "ooo:configuration-settings")
    item = w.el("config", "config-item", item_set)
    item.set(_q(ns, "config", "name"), "RecordChanges")
    item.set(_q(ns, "config", "type"), "boolean")
    item.text = "true" if record_changes else "false"
    return ET.tostring(root, xml_declaration=True, encoding="utf-8")


_MANIFEST = """<?xml version="1.0" encoding="UTF-8"?>
<manifest:manifest xmlns:manifest="urn:oasis:names:tc:opendocument:xmlns:manifest:1.0">
 <manifest:file-entry manifest:media-type="%s" manifest:full-path="/"/>
 <manifest:file-entry manifest:media-type="text/xml" manifest:full-path="content.xml"/>
 <manifest:file-entry manifest:media-type="text/xml" manifest:full-path="settings.xml"/>
</manifest:manifest>
""" % MIMETYPE


def write_ods(
    path: Path | str,
    sheets: list[SheetSpec],
    changes: list[dict] | None = None,
    namespace: str = "odf",
    record_setting: bool | None = None,
) -> Path:
    """Write a spreadsheet container. `changes=None` omits the
    tracked-changes element entirely (no history)."""
    ns = NAMESPACES[namespace]
    path = Path(path)
    with zipfile.ZipFile(path, "w", zipfile.ZIP_DEFLATED) as zf:
        info = zipfile.ZipInfo("mimetype", date_time=(2003, 3, 28, 0, 0, 0))
        info.compress_type = zipfile.ZIP_STORED
        zf.writestr(info, MIMETYPE)
        zf.writestr("content.xml", _content_xml(sheets, changes, ns))
        if record_setting is not None:
            zf.writestr("settings.xml", _settings_xml(ns, record_setting))
        zf.writestr("META-INF/manifest.xml", _MANIFEST)
    return path


# ---------------------------------------------------------------------------
# The cash-flow sample (Figure-style editing story)

MONTH_COLUMNS = list("BCDEFGHIJKLM")
MONTH_NAMES = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
]

_SALES = [None, 18000, 19000, 21000, 22000, 24000, 23000, 25000, 26000, 25000, 27000, 30000]
_SERVICES = [5000] * 12
_EXPENSE_ROWS = [
    ("Salaries", [12000] * 11 + [148000]),
    ("Rent", [3000] * 12),
    ("Marketing", [2000] * 9 + [4000, 3500, 2000]),
    ("Utilities", [800] * 12),
    ("Insurance", [550] * 12),
    ("Supplies", [500] * 12),
]
_TAXES = [3000] * 9 + [4000, 4000, 20000]

AUTHOR = "Neil Smith"
DAY = "2003-03-28"


def _c(value: float) -> CellContent:
    return static(make_currency(value))


def _f(source: str, cached: float | None = None) -> CellContent:
    return formula(source, make_currency(cached) if cached is not None else None)


def _zero_float_sum(col: str) -> CellContent:
    return formula(f"=SUM({col}11:{col}16)", make_float(0))


def cash_flow_sheet() -> SheetSpec:
    """The sample's final grid (what the saved document shows today)."""
    cells: dict[str, CellContent] = {
        "A1": static(make_string("Cash Flow Projection 2003")),
        "A3": static(make_string("Category")),
        "N3": static(make_string("Total")),
        "A4": static(make_string("Revenue")),
        "A5": static(make_string("Product sales")),
        "A6": static(make_string("Services")),
        "A8": static(make_string("Total revenue")),
        "A10": static(make_string("Expenses")),
        "A17": static(make_string("Travel")),
        "A18": static(make_string("Total expenses")),
        "A20": static(make_string("Taxes")),
        "A22": static(make_string("Net cash flow")),
    }
    for col, name in zip(MONTH_COLUMNS, MONTH_NAMES):
        cells[f"{col}3"] = static(make_string(name))

    # B5 was typed in as a bare constant late in the session (ct23); the
    # stale B8 total below predates it.
    cells["B5"] = _c(100000)
    revenue = []
    for i, col in enumerate(MONTH_COLUMNS):
        if _SALES[i] is not None:
            cells[f"{col}5"] = _c(_SALES[i])
        cells[f"{col}6"] = _c(_SERVICES[i])
        total = (_SALES[i] or 0) + _SERVICES[i]
        if col == "B":
            total = _SERVICES[i]  # B8 predates the late B5 entry
        revenue.append(total)
        cells[f"{col}8"] = _c(total)
    cells["N5"] = _c(sum(v for v in _SALES if v is not None))
    cells["N6"] = _c(sum(_SERVICES))
    cells["N8"] = _c(sum(revenue))

    expense_totals = [0.0] * 12
    for offset, (label, amounts) in enumerate(_EXPENSE_ROWS):
        row = 11 + offset
        cells[f"A{row}"] = static(make_string(label))
        for i, col in enumerate(MONTH_COLUMNS):
            cells[f"{col}{row}"] = _c(amounts[i])
            expense_totals[i] += amounts[i]
        cells[f"N{row}"] = _c(sum(amounts))

    cells["N17"] = _f("=SUM(B17:M17)", 3600)
    for i, col in enumerate(MONTH_COLUMNS):
        cells[f"{col}18"] = _f(f"=SUM({col}11:{col}17)", expense_totals[i])
        cells[f"{col}20"] = _c(_TAXES[i])
        cells[f"{col}22"] = _f(
            f"={col}8-{col}18-{col}20", revenue[i] - expense_totals[i] - _TAXES[i]
        )
    grand_expenses = sum(expense_totals)
    cells["N18"] = _f("=SUM(N11:N17)", grand_expenses)
    cells["N20"] = _c(sum(_TAXES))
    cells["N22"] = _f(
        "=N8-N18-N20", sum(revenue) - grand_expenses - sum(_TAXES)
    )
    return SheetSpec(name="Cash Flow", cells=cells)


def cash_flow_changes() -> list[dict]:
    """The 23 tracked changes, in the stored (document) order, which is
    deliberately not chronological."""

    def change(record_id, a1, time, before=EMPTY):
        return {
            "id": record_id,
            "kind": "cell-content",
            "a1": a1,
            "author": AUTHOR,
            "date": f"{DAY}T{time}",
            "before": before,
        }

    changes = [
        change("ct1", "K22", "21:51:18"),
        change("ct2", "L22", "21:51:18"),
        change("ct3", "M22", "21:51:18"),
        change("ct4", "N22", "21:51:35", formula("=SUM(B22:M22)", make_float(0))),
        {
            "id": "ct5",
            "kind": "row-insertion",
            "position": 16,
            "count": 1,
            "author": AUTHOR,
            "date": f"{DAY}T21:52:03",
        },
        change("ct6", "A17", "21:52:07"),
        change("ct7", "N17", "21:52:30"),
        change("ct8", "B18", "21:56:57", _zero_float_sum("B")),
        change("ct9", "C18", "21:57:03", _zero_float_sum("C")),
        change("ct10", "D18", "21:57:03", _zero_float_sum("D")),
        change("ct11", "E18", "21:57:03", _zero_float_sum("E")),
        change("ct12", "E18", "21:50:46"),
        change("ct13", "F18", "21:57:03", _zero_float_sum("F")),
        change("ct14", "F18", "21:50:46"),
        change("ct15", "G18", "21:57:03", _zero_float_sum("G")),
        change("ct16", "H18", "21:57:03", _zero_float_sum("H")),
        change("ct17", "I18", "21:57:03", _zero_float_sum("I")),
        change("ct18", "J18", "21:57:03", _zero_float_sum("J")),
        change("ct19", "K18", "21:57:03", _zero_float_sum("K")),
        change("ct20", "L18", "21:57:03", _zero_float_sum("L")),
        change("ct21", "M18", "21:57:03", _zero_float_sum("M")),
        change("ct22", "N18", "21:57:03", _zero_float_sum("N")),
        change("ct23", "B5", "22:00:44"),
    ]
    return changes


def write_fixture(path: Path | str, namespace: str = "odf") -> Path:
    """The cash-flow sample with its full change log."""
    return write_ods(
        path,
        sheets=[cash_flow_sheet()],
        changes=cash_flow_changes(),
        namespace=namespace,
        record_setting=True,
    )


def write_no_history(path: Path | str) -> Path:
    """Same grid, change recording never switched on."""
    return write_ods(path, sheets=[cash_flow_sheet()], changes=None)


def write_constant(path: Path | str) -> Path:
    """A tiny sheet holding a constant equation at D4."""
    sheet = SheetSpec(
        name="Sheet1",
        cells={
            "A1": static(make_string("scratch")),
            "D4": formula("=1+2+3", make_float(6)),
        },
    )
    return write_ods(path, sheets=[sheet], changes=[])
