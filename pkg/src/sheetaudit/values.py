"""Cell content: typed static values, formula text, cached results."""

from __future__ import annotations

import re
from dataclasses import dataclass

NUMERIC_TYPES = frozenset({"float", "currency", "percentage"})
VALUE_TYPES = NUMERIC_TYPES | {"string", "date", "boolean"}

CURRENCY_SYMBOLS = {
    "USD": "$",
    "CAD": "$",
    "AUD": "$",
    "EUR": "€",
    "GBP": "£",
    "JPY": "¥",
}

# "#DIV/0!", "#REF!", "#NAME?", "#N/A" and the OpenOffice "Err:NNN" family.
_ERROR_RE = re.compile(r"#[A-Z0-9/_]+[!?]?|#N/A|Err:\d+")


def format_number(value: float) -> str:
    """Plain canonical number text: integral floats lose the ".0"."""
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))


def _grouped(value: float, symbol: str) -> str:
    sign = "-" if value < 0 else ""
    magnitude = abs(value)
    if magnitude == int(magnitude):
        body = f"{int(magnitude):,}"
    else:
        body = f"{magnitude:,.2f}"
    return f"{sign}{symbol}{body}"


@dataclass(frozen=True)
class StaticValue:
    """A typed literal cell value with its canonical text form."""

    value_type: str
    lexical: str
    numeric: float | None = None
    currency_code: str | None = None

    def __post_init__(self):
        if self.value_type not in VALUE_TYPES:
            raise ValueError(f"bad value type {self.value_type!r}")
        has_numeric = self.numeric is not None
        if has_numeric != (self.value_type in NUMERIC_TYPES):
            raise ValueError(
                f"numeric must be present iff type is numeric ({self.value_type})"
            )


def make_float(value: float) -> StaticValue:
    return StaticValue("float", format_number(value), float(value))


def make_currency(value: float, code: str = "USD") -> StaticValue:
    symbol = CURRENCY_SYMBOLS.get(code)
    if symbol is None:
        lexical = f"{code} {_grouped(value, '')}"
    else:
        lexical = _grouped(value, symbol)
    return StaticValue("currency", lexical, float(value), code)


def make_percentage(fraction: float) -> StaticValue:
    return StaticValue("percentage", format_number(fraction * 100) + "%", float(fraction))


def make_string(text: str) -> StaticValue:
    return StaticValue("string", text)


def make_boolean(value: bool) -> StaticValue:
    return StaticValue("boolean", "TRUE" if value else "FALSE")


def make_date(lexical: str) -> StaticValue:
    return StaticValue("date", lexical)


@dataclass(frozen=True)
class ErrorValue:
    """An error token cached by the host program, e.g. "#DIV/0!"."""

    token: str


def looks_like_error(text: str) -> bool:
    return bool(_ERROR_RE.fullmatch(text.strip()))


@dataclass(frozen=True)
class CellContent:
    """Tagged cell content: empty, a static value, or a formula.

    Formulas keep their source text verbatim; `cached_result` is whatever
    result the producing program stored, never something we computed.
    """

    kind: str = "empty"
    static_value: StaticValue | None = None
    formula_source: str | None = None
    cached_result: StaticValue | ErrorValue | None = None

    def __post_init__(self):
        if self.kind == "empty":
            if self.static_value or self.formula_source or self.cached_result:
                raise ValueError("empty content must carry nothing")
        elif self.kind == "static":
            if self.static_value is None or self.formula_source is not None:
                raise ValueError("static content must carry exactly a value")
        elif self.kind == "formula":
            if self.formula_source is None or self.static_value is not None:
                raise ValueError("formula content must carry source text")
            if not self.formula_source.startswith("="):
                raise ValueError("formula source must begin with '='")
        else:
            raise ValueError(f"bad content kind {self.kind!r}")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"


EMPTY = CellContent()


def static(value: StaticValue) -> CellContent:
    return CellContent("static", static_value=value)


def formula(source: str, cached: StaticValue | ErrorValue | None = None) -> CellContent:
    return CellContent("formula", formula_source=source, cached_result=cached)


def render_result(result: StaticValue | ErrorValue) -> str:
    """The braced result clause body: "$5,150 (currency)" or "#REF! (error)"."""
    if isinstance(result, ErrorValue):
        return f"{result.token} (error)"
    return f"{result.lexical} ({result.value_type})"


def render_content(content: CellContent) -> str:
    """One-line content rendering used by change details and reports.

    empty -> "<empty>"; static -> "Travel (string)"; formulas show their
    source plus the cached result in braces when one exists.
    """
    if content.kind == "empty":
        return "<empty>"
    if content.kind == "static":
        v = content.static_value
        return f"{v.lexical} ({v.value_type})"
    text = content.formula_source
    if content.cached_result is not None:
        text += " {%s}" % render_result(content.cached_result)
    return text
