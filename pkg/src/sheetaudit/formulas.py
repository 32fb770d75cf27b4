"""Formula lexing, parsing, printing, and reference analysis.

The grammar (precedence low to high): comparison; & concatenation;
additive + -; multiplicative * /; ^ right-associative; unary -;
postfix %. Argument separators are ";" or ","; the decimal point is ".".
Sheet-qualified references use the dot form Sheet.A1, quoting sheet
names that are not plain identifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .addresses import CellAddress, column_index
from .errors import FormulaSyntaxError, NotFoldable
from .values import (
    ErrorValue,
    StaticValue,
    format_number,
    make_boolean,
    make_float,
    make_string,
)

DEFAULT_HOST = CellAddress("", 0, 0)

# ---------------------------------------------------------------------------
# AST

Node = Union[
    "Number", "Text", "Boolean", "CellRef", "RangeRef", "NameRef",
    "Unary", "Binary", "Call",
]


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Boolean:
    value: bool


@dataclass(frozen=True)
class CellRef:
    address: CellAddress
    sheet_explicit: bool = False


@dataclass(frozen=True)
class RangeRef:
    start: CellAddress
    end: CellAddress
    sheet_explicit: bool = False


@dataclass(frozen=True)
class NameRef:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" prefix negation, "%" postfix percent
    operand: Node


@dataclass(frozen=True)
class Binary:
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call:
    name: str  # stored uppercase
    args: tuple[Node, ...]


@dataclass(frozen=True)
class FormulaAst:
    root: Node


@dataclass(frozen=True)
class ReferenceSet:
    """Distinct reference targets of one formula."""

    cells: frozenset[CellAddress]
    ranges: frozenset[tuple[CellAddress, CellAddress]]
    names: frozenset[str]

    @property
    def is_empty(self) -> bool:
        return not (self.cells or self.ranges or self.names)


# ---------------------------------------------------------------------------
# Stored-text normalization

_NS_PREFIX_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*:(?==)")
_BRACKET_REF_RE = re.compile(r"\[([^][]+)\]")


def _debracket(m: re.Match) -> str:
    parts = []
    for part in m.group(1).split(":"):
        part = part.strip()
        if part.startswith("$"):
            part = part[1:]
        sheet, _, cell = part.rpartition(".")
        parts.append(f"{sheet}.{cell}" if sheet else cell)
    return ":".join(parts)


def normalize_stored_formula(raw: str) -> str:
    """Reduce the stored formula attribute to plain "=..." source text.

    Strips namespace prefixes ("of:=", "oooc:="), the legacy "=>=" display
    prefix, and rewrites ODF bracket references ("[.K8]") to bare A1 form.
    """
    text = raw.strip()
    text = _NS_PREFIX_RE.sub("", text)
    if text.startswith("=>="):
        text = text[2:]
    if "[" in text:
        text = _BRACKET_REF_RE.sub(_debracket, text)
    return text


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:[0-9]+(?:\.[0-9]+)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)
  | (?P<string>"(?:[^"]|"")*")
  | (?P<sheet>(?:[A-Za-z_][A-Za-z0-9_]*|'(?:[^']|'')*')\.)
  | (?P<cell>\$?[A-Za-z]{1,3}\$?[0-9]+(?![A-Za-z0-9_(]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><>|<=|>=|[=<>+\-*/^&%():;,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(source: str, offset: int) -> list[_Token]:
    tokens = []
    pos = offset
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise FormulaSyntaxError(source, pos, "a formula token")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


def _unquote_sheet(text: str) -> str:
    name = text[:-1]  # drop the trailing dot
    if name.startswith("'"):
        return name[1:-1].replace("''", "'")
    return name


_CELL_RE = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)([0-9]+)")


def _cell_address(token_text: str, sheet: str) -> tuple[CellAddress, int]:
    m = _CELL_RE.fullmatch(token_text)
    col_abs, letters, row_abs, digits = m.groups()
    address = CellAddress(
        sheet=sheet,
        column=column_index(letters),
        row=int(digits) - 1,
        col_absolute=bool(col_abs),
        row_absolute=bool(row_abs),
    )
    return address


# ---------------------------------------------------------------------------
# Parser

_COMPARISONS = ("=", "<>", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, source: str, tokens: list[_Token], host: CellAddress):
        self.source = source
        self.tokens = tokens
        self.i = 0
        self.host = host

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        raise FormulaSyntaxError(self.source, self.peek().pos, expected)

    def expect_op(self, text: str):
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            self.fail(f"'{text}'")
        return self.take()

    def at_op(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in texts

    def parse(self) -> Node:
        node = self.comparison()
        if self.peek().kind != "end":
            self.fail("end of formula")
        return node

    def comparison(self) -> Node:
        node = self.concat()
        while self.at_op(*_COMPARISONS):
            op = self.take().text
            node = Binary(op, node, self.concat())
        return node

    def concat(self) -> Node:
        node = self.additive()
        while self.at_op("&"):
            self.take()
            node = Binary("&", node, self.additive())
        return node

    def additive(self) -> Node:
        node = self.multiplicative()
        while self.at_op("+", "-"):
            op = self.take().text
            node = Binary(op, node, self.multiplicative())
        return node

    def multiplicative(self) -> Node:
        node = self.power()
        while self.at_op("*", "/"):
            op = self.take().text
            node = Binary(op, node, self.power())
        return node

    def power(self) -> Node:
        node = self.unary()
        if self.at_op("^"):
            self.take()
            node = Binary("^", node, self.power())
        return node

    def unary(self) -> Node:
        if self.at_op("-"):
            self.take()
            return Unary("-", self.unary())
        return self.postfix()

    def postfix(self) -> Node:
        node = self.atom()
        if self.at_op("%"):
            self.take()
            node = Unary("%", node)
        return node

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            text = tok.text
            if "." in text or "e" in text or "E" in text:
                return Number(float(text))
            return Number(int(text))
        if tok.kind == "string":
            self.take()
            return Text(tok.text[1:-1].replace('""', '"'))
        if tok.kind == "sheet":
            self.take()
            sheet = _unquote_sheet(tok.text)
            cell_tok = self.peek()
            if cell_tok.kind != "cell":
                self.fail("a cell address after the sheet name")
            self.take()
            return self.reference(cell_tok.text, sheet, explicit=True)
        if tok.kind == "cell":
            self.take()
            return self.reference(tok.text, self.host.sheet, explicit=False)
        if tok.kind == "ident":
            self.take()
            if self.at_op("("):
                return self.call(tok.text)
            upper = tok.text.upper()
            if upper in ("TRUE", "FALSE"):
                return Boolean(upper == "TRUE")
            return NameRef(tok.text)
        if self.at_op("("):
            self.take()
            node = self.comparison()
            self.expect_op(")")
            return node
        self.fail("a value, reference, or '('")

    def reference(self, cell_text: str, sheet: str, explicit: bool) -> Node:
        start = _cell_address(cell_text, sheet)
        if not self.at_op(":"):
            return CellRef(start, sheet_explicit=explicit)
        self.take()
        end_tok = self.peek()
        end_sheet = sheet
        if end_tok.kind == "sheet":
            self.take()
            end_sheet = _unquote_sheet(end_tok.text)
            if end_sheet != sheet:
                self.fail("a range endpoint on the same sheet")
            end_tok = self.peek()
        if end_tok.kind != "cell":
            self.fail("a cell address after ':'")
        self.take()
        end = _cell_address(end_tok.text, end_sheet)
        start, end = _normalize_range(start, end)
        return RangeRef(start, end, sheet_explicit=explicit)

    def call(self, name: str) -> Node:
        self.expect_op("(")
        args: list[Node] = []
        if self.at_op(")"):
            self.take()
            return Call(name.upper(), ())
        while True:
            args.append(self.comparison())
            if self.at_op(";", ","):
                self.take()
                continue
            self.expect_op(")")
            return Call(name.upper(), tuple(args))


def _normalize_range(a: CellAddress, b: CellAddress) -> tuple[CellAddress, CellAddress]:
    """Order endpoints so start <= end on both axes, flags moving with
    their coordinate."""
    (col_lo, col_lo_abs), (col_hi, col_hi_abs) = sorted(
        [(a.column, a.col_absolute), (b.column, b.col_absolute)]
    )
    (row_lo, row_lo_abs), (row_hi, row_hi_abs) = sorted(
        [(a.row, a.row_absolute), (b.row, b.row_absolute)]
    )
    start = CellAddress(a.sheet, col_lo, row_lo, col_lo_abs, row_lo_abs)
    end = CellAddress(a.sheet, col_hi, row_hi, col_hi_abs, row_hi_abs)
    return start, end


def parse_formula(source: str, host: CellAddress = DEFAULT_HOST) -> FormulaAst:
    """Parse formula source text (leading "=", stored prefixes tolerated)."""
    text = normalize_stored_formula(source)
    if not text.startswith("="):
        raise FormulaSyntaxError(text, 0, "'=' at the start of a formula")
    tokens = _tokenize(text, 1)
    return FormulaAst(_Parser(text, tokens, host).parse())


# ---------------------------------------------------------------------------
# Printing

_LEVELS = {
    "=": 1, "<>": 1, "<": 1, "<=": 1, ">": 1, ">=": 1,
    "&": 2,
    "+": 3, "-": 3,
    "*": 4, "/": 4,
    "^": 5,
}
_ATOM_LEVEL = 8


def _level(node: Node) -> int:
    if isinstance(node, Binary):
        return _LEVELS[node.op]
    if isinstance(node, Unary):
        return 6 if node.op == "-" else 7
    return _ATOM_LEVEL


def _print_cell(address: CellAddress, explicit: bool, quote=None) -> str:
    from .addresses import quote_sheet_name

    text = address.a1()
    if explicit:
        return f"{quote_sheet_name(address.sheet)}.{text}"
    return text


def _render(node: Node) -> str:
    if isinstance(node, Number):
        return format_number(node.value)
    if isinstance(node, Text):
        return '"%s"' % node.value.replace('"', '""')
    if isinstance(node, Boolean):
        return "TRUE" if node.value else "FALSE"
    if isinstance(node, CellRef):
        return _print_cell(node.address, node.sheet_explicit)
    if isinstance(node, RangeRef):
        return "%s:%s" % (
            _print_cell(node.start, node.sheet_explicit),
            _print_cell(node.end, False),
        )
    if isinstance(node, NameRef):
        return node.name
    if isinstance(node, Call):
        return "%s(%s)" % (node.name, ";".join(_render(a) for a in node.args))
    if isinstance(node, Unary):
        if node.op == "-":
            body = _render(node.operand)
            if _level(node.operand) < 6:
                body = f"({body})"
            return f"-{body}"
        body = _render(node.operand)
        if _level(node.operand) < _ATOM_LEVEL:
            body = f"({body})"
        return f"{body}%"
    if isinstance(node, Binary):
        level = _LEVELS[node.op]
        left, right = _render(node.left), _render(node.right)
        if node.op == "^":
            # right-associative: parenthesize an equal-level left child
            if _level(node.left) <= level:
                left = f"({left})"
            if _level(node.right) < level:
                right = f"({right})"
        else:
            if _level(node.left) < level:
                left = f"({left})"
            if _level(node.right) <= level:
                right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an AST node: {node!r}")


def print_canonical(ast: FormulaAst) -> str:
    """Deterministic A1 rendering; parse(print(ast)) equals ast."""
    return "=" + _render(ast.root)


# ---------------------------------------------------------------------------
# Reference extraction and classification

def _walk(node: Node):
    yield node
    if isinstance(node, Unary):
        yield from _walk(node.operand)
    elif isinstance(node, Binary):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Call):
        for arg in node.args:
            yield from _walk(arg)


def iter_nodes(ast):
    """All nodes of a FormulaAst (or subtree), depth first."""
    yield from _walk(ast.root if isinstance(ast, FormulaAst) else ast)


def extract_references(ast: FormulaAst) -> ReferenceSet:
    """Distinct cell, range, and name targets (duplicates collapse here;
    see cell_reference_counts for multiplicity)."""
    cells: dict[tuple, CellAddress] = {}
    ranges: dict[tuple, tuple[CellAddress, CellAddress]] = {}
    names: set[str] = set()
    for node in iter_nodes(ast):
        if isinstance(node, CellRef):
            cells.setdefault(node.address.key(), node.address)
        elif isinstance(node, RangeRef):
            ranges.setdefault(node.start.key() + node.end.key(), (node.start, node.end))
        elif isinstance(node, NameRef):
            names.add(node.name)
    return ReferenceSet(
        frozenset(cells.values()), frozenset(ranges.values()), frozenset(names)
    )


def cell_reference_counts(ast: FormulaAst) -> dict[tuple[str, int, int], int]:
    """Cell-reference multiset keyed by physical target, for duplicate
    detection."""
    counts: dict[tuple[str, int, int], int] = {}
    for node in iter_nodes(ast):
        if isinstance(node, CellRef):
            key = node.address.key()
            counts[key] = counts.get(key, 0) + 1
    return counts


def classify_content(cell, host: CellAddress = DEFAULT_HOST) -> str:
    """empty | static | constant-formula | referencing-formula,
    or "formula (unparsed)" when the source does not parse."""
    if cell.kind == "empty":
        return "empty"
    if cell.kind == "static":
        return "static"
    try:
        ast = parse_formula(cell.formula_source, host)
    except FormulaSyntaxError:
        return "formula (unparsed)"
    if extract_references(ast).is_empty:
        return "constant-formula"
    return "referencing-formula"


# ---------------------------------------------------------------------------
# Constant folding

def fold_constant(ast: FormulaAst) -> StaticValue | ErrorValue:
    """Evaluate a reference-free, call-free formula.

    Integer inputs use exact integer arithmetic (division excepted).
    Division by zero folds to the "#DIV/0!" error token.
    """
    try:
        result = _fold(ast.root)
    except ZeroDivisionError:
        return ErrorValue("#DIV/0!")
    if isinstance(result, ErrorValue):
        return result
    if isinstance(result, bool):
        return make_boolean(result)
    if isinstance(result, (int, float)):
        return make_float(result)
    return make_string(result)


def _as_number(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (int, float)):
        return v
    raise NotFoldable(f"not a number: {v!r}")


def _fold(node: Node):
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Text):
        return node.value
    if isinstance(node, Boolean):
        return node.value
    if isinstance(node, (CellRef, RangeRef, NameRef)):
        raise NotFoldable("formula contains references")
    if isinstance(node, Call):
        raise NotFoldable(f"function call {node.name}")
    if isinstance(node, Unary):
        v = _fold(node.operand)
        if isinstance(v, ErrorValue):
            return v
        if node.op == "-":
            return -_as_number(v)
        return _as_number(v) / 100
    if isinstance(node, Binary):
        left = _fold(node.left)
        if isinstance(left, ErrorValue):
            return left
        right = _fold(node.right)
        if isinstance(right, ErrorValue):
            return right
        op = node.op
        if op == "&":
            return _fold_text(left) + _fold_text(right)
        if op in ("=", "<>", "<", "<=", ">", ">="):
            return _compare(op, left, right)
        a, b = _as_number(left), _as_number(right)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a / b
        if op == "^":
            if isinstance(a, int) and isinstance(b, int) and abs(b) > 64:
                a = float(a)
            try:
                result = a ** b
            except OverflowError:
                return ErrorValue("#NUM!")
            if isinstance(result, complex):
                return ErrorValue("#NUM!")  # negative base, fractional exponent
            return result
    raise TypeError(f"not an AST node: {node!r}")


def _fold_text(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    return format_number(v)


def _compare(op: str, left, right):
    if isinstance(left, str) != isinstance(right, str):
        raise NotFoldable("mixed-type comparison")
    if op == "=":
        return left == right
    if op == "<>":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


# ---------------------------------------------------------------------------
# Copy/fill shape normalization

def _shape_axis(coord: int, host_coord: int, absolute: bool, letter: str) -> str:
    if absolute:
        return f"{letter}{coord + 1}"
    return f"{letter}[{coord - host_coord}]"


def _shape_cell(address: CellAddress, explicit: bool, host: CellAddress) -> str:
    from .addresses import quote_sheet_name

    text = _shape_axis(address.row, host.row, address.row_absolute, "R") + _shape_axis(
        address.column, host.column, address.col_absolute, "C"
    )
    if explicit:
        return f"{quote_sheet_name(address.sheet)}.{text}"
    return text


def _shape(node: Node, host: CellAddress) -> str:
    if isinstance(node, CellRef):
        return _shape_cell(node.address, node.sheet_explicit, host)
    if isinstance(node, RangeRef):
        return "%s:%s" % (
            _shape_cell(node.start, node.sheet_explicit, host),
            _shape_cell(node.end, False, host),
        )
    if isinstance(node, Call):
        return "%s(%s)" % (node.name, ";".join(_shape(a, host) for a in node.args))
    if isinstance(node, Unary):
        if node.op == "-":
            body = _shape(node.operand, host)
            if _level(node.operand) < 6:
                body = f"({body})"
            return f"-{body}"
        body = _shape(node.operand, host)
        if _level(node.operand) < _ATOM_LEVEL:
            body = f"({body})"
        return f"{body}%"
    if isinstance(node, Binary):
        level = _LEVELS[node.op]
        left, right = _shape(node.left, host), _shape(node.right, host)
        if node.op == "^":
            if _level(node.left) <= level:
                left = f"({left})"
            if _level(node.right) < level:
                right = f"({right})"
        else:
            if _level(node.left) < level:
                left = f"({left})"
            if _level(node.right) <= level:
                right = f"({right})"
        return f"{left}{node.op}{right}"
    return _render(node)


def relative_shape(ast: FormulaAst, host: CellAddress) -> str:
    """Host-independent R1C1-style rendering: relative axes become signed
    offsets from `host`, absolute axes stay fixed. Correct copy/fill images
    of one formula produce identical text."""
    return _shape(ast.root, host)
