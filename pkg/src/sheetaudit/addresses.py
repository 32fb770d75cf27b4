"""Cell addresses, A1 notation, and grid rectangles."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

# A..XFD gives 16384 columns, the round-trip guarantee of format/parse below.
MAX_COLUMNS = 16384

_A1_RE = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)([0-9]+)")


def column_letters(index: int) -> str:
    """0-based column index -> spreadsheet letters (0 -> A, 27 -> AB)."""
    if index < 0:
        raise ValueError(f"negative column index {index}")
    s = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        s = chr(ord("A") + rem) + s
    return s


def column_index(letters: str) -> int:
    """Spreadsheet letters -> 0-based column index."""
    n = 0
    for ch in letters.upper():
        if not "A" <= ch <= "Z":
            raise ValueError(f"bad column letters {letters!r}")
        n = n * 26 + (ord(ch) - ord("A") + 1)
    return n - 1


@dataclass(frozen=True)
class CellAddress:
    """One cell position. `sheet` may be "" when context supplies it."""

    sheet: str
    column: int
    row: int
    col_absolute: bool = False
    row_absolute: bool = False

    def __post_init__(self):
        if self.column < 0 or self.row < 0:
            raise ValueError(f"negative address ({self.column},{self.row})")

    def a1(self, with_sheet: bool = False) -> str:
        text = "%s%s%s%d" % (
            "$" if self.col_absolute else "",
            column_letters(self.column),
            "$" if self.row_absolute else "",
            self.row + 1,
        )
        if with_sheet and self.sheet:
            return f"{quote_sheet_name(self.sheet)}.{text}"
        return text

    def key(self) -> tuple[str, int, int]:
        """Identity ignoring absolute markers (same physical cell)."""
        return (self.sheet, self.row, self.column)

    def moved(self, d_rows: int, d_cols: int) -> "CellAddress":
        return replace(self, row=self.row + d_rows, column=self.column + d_cols)


def quote_sheet_name(name: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9_]+", name):
        return name
    return "'" + name.replace("'", "''") + "'"


def parse_a1(text: str, sheet: str = "") -> CellAddress:
    """Parse a bare A1 token (no sheet prefix), e.g. "$K$22"."""
    m = _A1_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"not an A1 cell address: {text!r}")
    col_abs, letters, row_abs, digits = m.groups()
    return CellAddress(
        sheet=sheet,
        column=column_index(letters),
        row=int(digits) - 1,
        col_absolute=bool(col_abs),
        row_absolute=bool(row_abs),
    )


@dataclass(frozen=True)
class Rectangle:
    """Inclusive cell rectangle used by range references and filters."""

    top: int
    left: int
    bottom: int
    right: int

    def __post_init__(self):
        if self.top > self.bottom or self.left > self.right:
            raise ValueError("rectangle corners out of order")

    def contains(self, row: int, column: int) -> bool:
        return self.top <= row <= self.bottom and self.left <= column <= self.right

    def intersection(self, other: "Rectangle") -> "Rectangle | None":
        top = max(self.top, other.top)
        left = max(self.left, other.left)
        bottom = min(self.bottom, other.bottom)
        right = min(self.right, other.right)
        if top > bottom or left > right:
            return None
        return Rectangle(top, left, bottom, right)

    def cells(self):
        for r in range(self.top, self.bottom + 1):
            for c in range(self.left, self.right + 1):
                yield r, c

    def a1(self) -> str:
        start = CellAddress("", self.left, self.top).a1()
        end = CellAddress("", self.right, self.bottom).a1()
        return start if start == end else f"{start}:{end}"


def parse_rectangle(text: str) -> Rectangle:
    """Parse "A1:C9" or a single cell "K22" into a Rectangle."""
    parts = text.split(":")
    if len(parts) == 1:
        a = parse_a1(parts[0])
        return Rectangle(a.row, a.column, a.row, a.column)
    if len(parts) == 2:
        a, b = parse_a1(parts[0]), parse_a1(parts[1])
        return Rectangle(
            min(a.row, b.row),
            min(a.column, b.column),
            max(a.row, b.row),
            max(a.column, b.column),
        )
    raise ValueError(f"not a cell range: {text!r}")


@dataclass(frozen=True)
class Position:
    """Location of a structural change: `count` rows/columns at `index`."""

    sheet: str
    axis: str  # "row" or "column"
    index: int  # 0-based index of the first affected row/column
    count: int = 1

    def __post_init__(self):
        if self.axis not in ("row", "column"):
            raise ValueError(f"bad axis {self.axis!r}")
        if self.index < 0 or self.count < 1:
            raise ValueError("bad structural position")

    def display(self) -> str:
        """The Address-column text: row number or column letters."""
        if self.axis == "row":
            return str(self.index + 1)
        return column_letters(self.index)
