"""The change-record filter panel: author, date, cell-range, content
transitions, and record-kind predicates, each include/exclude/disabled,
composed conjunctively.

Text form (CLI flags and service query parameters), one filter per entry,
prefixed "+" (include) or "-" (exclude):

    +author=J* Doe,ci
    +date=2001-12-24..2002-01-01
    +range=Cash Flow!A1:N30
    -transition=empty->any
    +kind=row-insert
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Union

from .addresses import Rectangle, parse_rectangle
from .errors import InvalidFilter
from .model import ChangeRecord, Workbook
from .wildcards import match_wildcard

CONTENT_KINDS = ("empty", "static", "formula", "dont-care")

_KIND_TEXT = {
    "content": "cell-content",
    "row-insert": "row-insertion",
    "row-delete": "row-deletion",
    "col-insert": "column-insertion",
    "col-delete": "column-deletion",
}


@dataclass(frozen=True)
class AuthorPattern:
    pattern: str
    ignore_case: bool = False


@dataclass(frozen=True)
class DateRange:
    start: Optional[date] = None
    end: Optional[date] = None


@dataclass(frozen=True)
class CellRange:
    rectangle: Rectangle
    sheet_pattern: Optional[str] = None


@dataclass(frozen=True)
class ContentTransition:
    before: str = "dont-care"
    after: str = "dont-care"

    def __post_init__(self):
        for kind in (self.before, self.after):
            if kind not in CONTENT_KINDS:
                raise InvalidFilter(f"bad content kind {kind!r}")


@dataclass(frozen=True)
class KindIs:
    kind: str


Predicate = Union[AuthorPattern, DateRange, CellRange, ContentTransition, KindIs]


@dataclass(frozen=True)
class FilterSpec:
    action: str  # include | exclude | disabled
    predicate: Predicate

    def __post_init__(self):
        if self.action not in ("include", "exclude", "disabled"):
            raise InvalidFilter(f"bad filter action {self.action!r}")


def validate_filter(spec: FilterSpec) -> None:
    p = spec.predicate
    if isinstance(p, DateRange):
        if p.start is not None and p.end is not None and p.start > p.end:
            raise InvalidFilter(f"date range is reversed: {p.start}..{p.end}")
    if isinstance(p, KindIs) and p.kind not in _KIND_TEXT.values():
        raise InvalidFilter(f"unknown record kind {p.kind!r}")


def _kind_matches(wanted: str, content) -> bool:
    return wanted == "dont-care" or content.kind == wanted


def eval_filter(spec: FilterSpec, record: ChangeRecord, workbook: Workbook = None) -> bool:
    """Does the predicate hold for this record? (The action is applied by
    apply_filters; disabled specs simply never reach evaluation.)"""
    p = spec.predicate
    if isinstance(p, AuthorPattern):
        return match_wildcard(p.pattern, record.author, p.ignore_case)
    if isinstance(p, DateRange):
        day = record.timestamp.date()
        if p.start is not None and day < p.start:
            return False
        if p.end is not None and day > p.end:
            return False
        return True
    if isinstance(p, CellRange):
        if record.kind != "cell-content":
            return False
        if p.sheet_pattern is not None and not match_wildcard(
            p.sheet_pattern, record.address.sheet
        ):
            return False
        return p.rectangle.contains(record.address.row, record.address.column)
    if isinstance(p, ContentTransition):
        if record.kind != "cell-content":
            return False
        return _kind_matches(p.before, record.before) and _kind_matches(
            p.after, record.after
        )
    if isinstance(p, KindIs):
        return record.kind == p.kind
    raise InvalidFilter(f"unknown predicate {p!r}")


def apply_filters(specs: list[FilterSpec], workbook: Workbook) -> list[ChangeRecord]:
    """Records passing every enabled include and no enabled exclude,
    chronological order preserved."""
    for spec in specs:
        validate_filter(spec)
    enabled = [s for s in specs if s.action != "disabled"]
    includes = [s for s in enabled if s.action == "include"]
    excludes = [s for s in enabled if s.action == "exclude"]
    out = []
    for record in workbook.changes:
        if all(eval_filter(s, record, workbook) for s in includes) and not any(
            eval_filter(s, record, workbook) for s in excludes
        ):
            out.append(record)
    return out


# ---------------------------------------------------------------------------
# Text form

def parse_filter(text: str) -> FilterSpec:
    text = text.strip()
    if not text or text[0] not in "+-":
        raise InvalidFilter(f"filter must start with '+' or '-': {text!r}")
    action = "include" if text[0] == "+" else "exclude"
    body = text[1:]
    if "=" not in body:
        raise InvalidFilter(f"filter needs field=value: {text!r}")
    f_name, value = body.split("=", 1)
    f_name = f_name.strip().lower()
    try:
        predicate = _parse_predicate(f_name, value)
    except InvalidFilter:
        raise
    except (ValueError, KeyError) as exc:
        raise InvalidFilter(f"bad {f_name} filter {value!r}: {exc}") from exc
    spec = FilterSpec(action, predicate)
    validate_filter(spec)
    return spec


def _parse_predicate(f_name: str, value: str) -> Predicate:
    if f_name == "author":
        ignore_case = False
        if value.endswith(",ci"):
            value, ignore_case = value[:-3], True
        return AuthorPattern(value, ignore_case)
    if f_name == "date":
        if ".." not in value:
            raise InvalidFilter(f"date filter needs from..to: {value!r}")
        lo, hi = value.split("..", 1)
        return DateRange(
            date.fromisoformat(lo) if lo else None,
            date.fromisoformat(hi) if hi else None,
        )
    if f_name == "range":
        sheet_pattern = None
        if "!" in value:
            sheet_pattern, value = value.split("!", 1)
        return CellRange(parse_rectangle(value), sheet_pattern)
    if f_name == "transition":
        if "->" not in value:
            raise InvalidFilter(f"transition filter needs before->after: {value!r}")
        before, after = value.split("->", 1)
        mapping = {"any": "dont-care"}
        return ContentTransition(
            mapping.get(before.strip(), before.strip()),
            mapping.get(after.strip(), after.strip()),
        )
    if f_name == "kind":
        if value not in _KIND_TEXT:
            raise InvalidFilter(
                f"unknown kind {value!r} (expected one of {sorted(_KIND_TEXT)})"
            )
        return KindIs(_KIND_TEXT[value])
    raise InvalidFilter(f"unknown filter field {f_name!r}")


def parse_filters(texts: list[str]) -> list[FilterSpec]:
    return [parse_filter(t) for t in texts]


# ---------------------------------------------------------------------------
# Summaries

@dataclass
class Summary:
    total: int = 0
    by_kind: dict = field(default_factory=dict)
    by_author: dict = field(default_factory=dict)
    by_date: dict = field(default_factory=dict)
    min_date: Optional[date] = None
    max_date: Optional[date] = None


def summarize(records: list[ChangeRecord]) -> Summary:
    summary = Summary(total=len(records))
    for record in records:
        day = record.timestamp.date()
        summary.by_kind[record.kind] = summary.by_kind.get(record.kind, 0) + 1
        summary.by_author[record.author] = summary.by_author.get(record.author, 0) + 1
        summary.by_date[day] = summary.by_date.get(day, 0) + 1
    if records:
        days = sorted(summary.by_date)
        summary.min_date, summary.max_date = days[0], days[-1]
    return summary
