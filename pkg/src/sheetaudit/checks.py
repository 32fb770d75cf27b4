"""Static checks over a grid snapshot (current document or any checkpoint).

Check catalog:

  SA1  constant equations (reference-free formulas)
  SA2  cached error results
  SA3  formulas referring to blank cells (direct cell references only;
       aggregate ranges routinely span blanks, so range members are exempt)
  SA4  aggregate ranges whose boundary neighbour holds compatible data
  SA5  copy/fill inconsistencies inside runs of adjacent formulas
  SA6  duplicate references to one cell inside a formula
  SA7  overlapping range references inside a formula
  SA8  protection holes (when the configuration demands protection)
  SA9  literal constants where a reference is expected (e.g. NPV rate)
  SA10 functions whose category is deny-listed
  SA0  formulas that do not parse (reported, skipped by formula checks)
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .addresses import CellAddress, Rectangle
from .errors import FormulaSyntaxError
from .formulas import (
    Call,
    Number,
    RangeRef,
    Unary,
    cell_reference_counts,
    extract_references,
    fold_constant,
    iter_nodes,
    parse_formula,
)
from .errors import NotFoldable
from .model import SheetGrid
from .values import CellContent, ErrorValue, NUMERIC_TYPES

CHECK_IDS = (
    "SA0-unparsable-formula",
    "SA1-constant-equation",
    "SA2-error-value",
    "SA3-blank-reference",
    "SA4-range-boundary",
    "SA5-fill-inconsistency",
    "SA6-duplicate-reference",
    "SA7-overlapping-ranges",
    "SA8-protection-hole",
    "SA9-literal-parameter",
    "SA10-function-category",
)


@dataclass(frozen=True)
class Finding:
    check_id: str
    severity: str  # info | warn | alert
    sheet: str
    address: Optional[CellAddress]  # None for sheet-level findings
    message: str
    evidence: dict = field(default_factory=dict)

    def location(self) -> str:
        return self.address.a1() if self.address else self.sheet


@dataclass
class CheckConfig:
    enabled: set = field(default_factory=lambda: set(CHECK_IDS))
    require_protection: bool = False
    aggregate_functions: set = field(
        default_factory=lambda: {
            "SUM", "AVERAGE", "COUNT", "COUNTA", "MIN", "MAX", "PRODUCT", "MEDIAN",
        }
    )
    # function -> 1-based argument positions that are expected to reference
    reference_expected: dict = field(
        default_factory=lambda: {"NPV": (1,), "PV": (1,), "FV": (1,), "RATE": (1,)}
    )
    categories: dict = field(
        default_factory=lambda: {
            "trigonometry": {
                "SIN", "COS", "TAN", "COT", "ASIN", "ACOS", "ATAN", "ATAN2",
                "SINH", "COSH", "TANH", "DEGREES", "RADIANS",
            }
        }
    )
    deny_categories: set = field(default_factory=set)

    def category_of(self, function: str) -> Optional[str]:
        for name, members in self.categories.items():
            if function in members:
                return name
        return None


def _check_key(check_id: str) -> str:
    return check_id.split("-")[0]


def load_config(path: Path | str) -> CheckConfig:
    """Plain key = value configuration; see docs/check-config.md."""
    config = CheckConfig()
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "checks":
            wanted = {v.strip().upper() for v in value.split(",") if v.strip()}
            config.enabled = {c for c in CHECK_IDS if _check_key(c).upper() in wanted}
        elif key == "require_protection":
            config.require_protection = value.lower() in ("true", "yes", "on", "1")
        elif key == "aggregates":
            config.aggregate_functions = {
                v.strip().upper() for v in value.split(",") if v.strip()
            }
        elif key.startswith("refexpected."):
            fn = key.split(".", 1)[1].upper()
            config.reference_expected[fn] = tuple(
                int(v) for v in value.split(",") if v.strip()
            )
        elif key.startswith("category."):
            config.categories[key.split(".", 1)[1]] = {
                v.strip().upper() for v in value.split(",") if v.strip()
            }
        elif key == "deny":
            config.deny_categories = {v.strip() for v in value.split(",") if v.strip()}
        else:
            raise ValueError(f"line {line_no}: unknown configuration key {key!r}")
    return config


# ---------------------------------------------------------------------------

def _numeric_like(content: CellContent) -> bool:
    """Compatible with a numeric aggregate: numbers, or formulas whose
    cached result is numeric (or missing)."""
    if content.kind == "static":
        return content.static_value.value_type in NUMERIC_TYPES
    if content.kind == "formula":
        cached = content.cached_result
        if cached is None:
            return True
        if isinstance(cached, ErrorValue):
            return False
        return cached.value_type in NUMERIC_TYPES
    return False


class _SheetScan:
    def __init__(self, sheets: list[SheetGrid], sheet: SheetGrid, config: CheckConfig):
        self.sheets = {s.name: s for s in sheets}
        self.sheet = sheet
        self.config = config
        self.findings: list[Finding] = []
        # (row, col) -> parsed AST, or None when the formula does not parse
        self.parsed: dict[tuple[int, int], object] = {}
        for (row, col), content in sheet.cells.items():
            if content.kind != "formula":
                continue
            host = CellAddress(sheet.name, col, row)
            try:
                self.parsed[(row, col)] = parse_formula(content.formula_source, host)
            except FormulaSyntaxError:
                self.parsed[(row, col)] = None

    def emit(self, check_id, severity, address, message, **evidence):
        if check_id not in self.config.enabled:
            return
        self.findings.append(
            Finding(check_id, severity, self.sheet.name, address, message, evidence)
        )

    def addr(self, row: int, col: int) -> CellAddress:
        return CellAddress(self.sheet.name, col, row)

    def content(self, sheet_name: str, row: int, col: int) -> CellContent | None:
        sheet = self.sheets.get(sheet_name)
        return sheet.cell(row, col) if sheet is not None else None

    # -- per-cell checks ----------------------------------------------------

    def run(self):
        for (row, col), content in sorted(self.sheet.cells.items()):
            if content.kind != "formula":
                continue
            address = self.addr(row, col)
            ast = self.parsed[(row, col)]
            self.check_error_value(address, content)
            if ast is None:
                self.check_unparsable(address, content)
                continue
            self.check_constant(address, content, ast)
            self.check_blank_references(address, content, ast)
            self.check_range_boundaries(address, content, ast)
            self.check_duplicates(address, content, ast)
            self.check_overlaps(address, content, ast)
            self.check_literal_parameters(address, content, ast)
            self.check_categories(address, content, ast)
        self.check_fill_runs()
        self.check_protection()
        return self.findings

    def check_unparsable(self, address, content):
        source = content.formula_source
        external = "://" in source or "'#" in source or "#$" in source
        message = (
            "external reference is not analyzed"
            if external
            else "formula could not be parsed; formula checks skipped"
        )
        self.emit(
            "SA0-unparsable-formula", "info", address, message, formula=source
        )

    def check_error_value(self, address, content):
        cached = content.cached_result
        if isinstance(cached, ErrorValue):
            self.emit(
                "SA2-error-value",
                "alert",
                address,
                f"cell result is the error {cached.token}",
                formula=content.formula_source,
                token=cached.token,
            )

    def check_constant(self, address, content, ast):
        if not extract_references(ast).is_empty:
            return
        try:
            value = fold_constant(ast)
        except NotFoldable:
            self.emit(
                "SA1-constant-equation",
                "info",
                address,
                "constant formula (contains function calls; not folded)",
                formula=content.formula_source,
            )
            return
        if isinstance(value, ErrorValue):
            rendered = value.token
        else:
            rendered = value.lexical
        self.emit(
            "SA1-constant-equation",
            "info",
            address,
            f"constant formula evaluates to {rendered}",
            formula=content.formula_source,
            value=rendered,
        )

    def check_blank_references(self, address, content, ast):
        blanks = []
        for ref in sorted(extract_references(ast).cells, key=lambda a: a.key()):
            target = self.content(ref.sheet, ref.row, ref.column)
            if target is not None and target.is_empty:
                blanks.append(ref.a1(with_sheet=ref.sheet != self.sheet.name))
        if blanks:
            self.emit(
                "SA3-blank-reference",
                "warn",
                address,
                "references blank cell%s %s"
                % ("s" if len(blanks) > 1 else "", ", ".join(blanks)),
                formula=content.formula_source,
                blank_cells=blanks,
            )

    def _aggregate_ranges(self, ast):
        for node in iter_nodes(ast):
            if isinstance(node, Call) and node.name in self.config.aggregate_functions:
                for arg in node.args:
                    if isinstance(arg, RangeRef):
                        yield node.name, arg

    def check_range_boundaries(self, address, content, ast):
        for fn, rng in self._aggregate_ranges(ast):
            single_col = rng.start.column == rng.end.column and rng.start.row < rng.end.row
            single_row = rng.start.row == rng.end.row and rng.start.column < rng.end.column
            if not (single_col or single_row):
                continue
            if single_col:
                beyond = [
                    (rng.start.row - 1, rng.start.column),
                    (rng.end.row + 1, rng.start.column),
                ]
            else:
                beyond = [
                    (rng.start.row, rng.start.column - 1),
                    (rng.start.row, rng.end.column + 1),
                ]
            for row, col in beyond:
                if row < 0 or col < 0:
                    continue
                if rng.start.sheet == address.sheet and (row, col) == (
                    address.row,
                    address.column,
                ):
                    continue  # the aggregate's own host cell
                neighbour = self.content(rng.start.sheet, row, col)
                if neighbour is None or neighbour.is_empty:
                    continue
                if not _numeric_like(neighbour):
                    continue
                cell_a1 = CellAddress(rng.start.sheet, col, row).a1()
                self.emit(
                    "SA4-range-boundary",
                    "warn",
                    address,
                    f"{fn} range {rng.start.a1()}:{rng.end.a1()} stops just "
                    f"short of data in {cell_a1}",
                    formula=content.formula_source,
                    range=f"{rng.start.a1()}:{rng.end.a1()}",
                    boundary_cell=cell_a1,
                )

    def check_duplicates(self, address, content, ast):
        for key, count in sorted(cell_reference_counts(ast).items()):
            if count < 2:
                continue
            sheet_name, row, col = key
            cell_a1 = CellAddress(sheet_name, col, row).a1(
                with_sheet=sheet_name != self.sheet.name
            )
            self.emit(
                "SA6-duplicate-reference",
                "info",
                address,
                f"references {cell_a1} {count} times",
                formula=content.formula_source,
                cell=cell_a1,
                count=count,
            )

    def check_overlaps(self, address, content, ast):
        ranges = [n for n in iter_nodes(ast.root) if isinstance(n, RangeRef)]
        for i in range(len(ranges)):
            for j in range(i + 1, len(ranges)):
                a, b = ranges[i], ranges[j]
                if a.start.sheet != b.start.sheet:
                    continue
                rect_a = Rectangle(a.start.row, a.start.column, a.end.row, a.end.column)
                rect_b = Rectangle(b.start.row, b.start.column, b.end.row, b.end.column)
                overlap = rect_a.intersection(rect_b)
                if overlap is None:
                    continue
                self.emit(
                    "SA7-overlapping-ranges",
                    "warn",
                    address,
                    f"ranges {rect_a.a1()} and {rect_b.a1()} overlap in {overlap.a1()}",
                    formula=content.formula_source,
                    range_a=rect_a.a1(),
                    range_b=rect_b.a1(),
                    intersection=overlap.a1(),
                )

    def check_literal_parameters(self, address, content, ast):
        for node in iter_nodes(ast.root):
            if not isinstance(node, Call):
                continue
            positions = self.config.reference_expected.get(node.name)
            if not positions:
                continue
            for position in positions:
                if position > len(node.args):
                    continue
                arg = node.args[position - 1]
                if _is_literal_number(arg):
                    self.emit(
                        "SA9-literal-parameter",
                        "warn",
                        address,
                        f"{node.name} argument {position} is a literal constant "
                        "where a reference is expected",
                        formula=content.formula_source,
                        function=node.name,
                        position=position,
                    )

    def check_categories(self, address, content, ast):
        for node in iter_nodes(ast.root):
            if not isinstance(node, Call):
                continue
            category = self.config.category_of(node.name)
            if category is not None and category in self.config.deny_categories:
                self.emit(
                    "SA10-function-category",
                    "info",
                    address,
                    f"{node.name} belongs to the flagged category '{category}'",
                    formula=content.formula_source,
                    function=node.name,
                    category=category,
                )

    # -- run and sheet level checks ------------------------------------------

    def _shape_at(self, row, col):
        from .formulas import relative_shape

        ast = self.parsed.get((row, col))
        if ast is None:
            return None
        return relative_shape(ast, self.addr(row, col))

    def check_fill_runs(self):
        formula_cells = set(self.parsed)
        for axis in ("row", "column"):
            runs = self._runs(formula_cells, axis)
            for run in runs:
                if len(run) < 3:
                    continue
                shapes = {cell: self._shape_at(*cell) for cell in run}
                run = [cell for cell in run if shapes[cell] is not None]
                if len(run) < 3:
                    continue
                counts = Counter(shapes[cell] for cell in run).most_common()
                if len(counts) < 2 or counts[0][1] == counts[1][1]:
                    continue  # uniform, or tied vote
                majority = counts[0][0]
                for cell in run:
                    if shapes[cell] != majority:
                        self.emit(
                            "SA5-fill-inconsistency",
                            "warn",
                            self.addr(*cell),
                            "formula shape differs from the rest of its "
                            f"{axis} run",
                            shape=shapes[cell],
                            majority_shape=majority,
                            run="%s..%s" % (
                                self.addr(*run[0]).a1(),
                                self.addr(*run[-1]).a1(),
                            ),
                            orientation=axis,
                        )

    def _runs(self, cells, axis):
        """Maximal runs of adjacent formula cells along rows or columns."""
        runs = []
        if axis == "row":
            lanes = {}
            for row, col in cells:
                lanes.setdefault(row, []).append(col)
            for row, cols in sorted(lanes.items()):
                for chunk in _consecutive(sorted(cols)):
                    runs.append([(row, col) for col in chunk])
        else:
            lanes = {}
            for row, col in cells:
                lanes.setdefault(col, []).append(row)
            for col, rows in sorted(lanes.items()):
                for chunk in _consecutive(sorted(rows)):
                    runs.append([(row, col) for row in chunk])
        return runs

    def check_protection(self):
        if not self.config.require_protection:
            return
        if not self.sheet.protected:
            self.emit(
                "SA8-protection-hole",
                "alert",
                None,
                f"sheet '{self.sheet.name}' is not protected",
                scope="sheet",
            )
            return
        for (row, col), explicit in sorted(self.sheet.cell_protection.items()):
            if explicit is False:
                self.emit(
                    "SA8-protection-hole",
                    "alert",
                    self.addr(row, col),
                    "cell is explicitly unprotected on a protected sheet",
                    scope="cell",
                )


def _consecutive(values: list[int]) -> list[list[int]]:
    chunks: list[list[int]] = []
    for v in values:
        if chunks and v == chunks[-1][-1] + 1:
            chunks[-1].append(v)
        else:
            chunks.append([v])
    return chunks


def _is_literal_number(node) -> bool:
    if isinstance(node, Number):
        return True
    if isinstance(node, Unary):
        return _is_literal_number(node.operand)
    return False


def scan(snapshot, config: CheckConfig | None = None) -> list[Finding]:
    """Run every enabled check over a Workbook or GridSnapshot.

    Deterministic: findings sort by (sheet order, row, column, check id),
    sheet-level findings first within their sheet.
    """
    config = config or CheckConfig()
    sheets = snapshot.sheets
    findings: list[Finding] = []
    order = {sheet.name: i for i, sheet in enumerate(sheets)}
    for sheet in sheets:
        findings.extend(_SheetScan(sheets, sheet, config).run())
    findings.sort(
        key=lambda f: (
            order[f.sheet],
            f.address.row if f.address else -1,
            f.address.column if f.address else -1,
            f.check_id,
        )
    )
    return findings
