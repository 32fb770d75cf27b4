"""Wildcard matching for filter patterns: "*" any run, "?" one character."""

from __future__ import annotations

import functools
import re


def translate(pattern: str) -> str:
    """Wildcard pattern -> anchored regular expression source."""
    parts = []
    for ch in pattern:
        if ch == "*":
            parts.append(".*")
        elif ch == "?":
            parts.append(".")
        else:
            parts.append(re.escape(ch))
    return "".join(parts) + r"\Z"


@functools.lru_cache(maxsize=4096)
def _compiled(pattern: str) -> re.Pattern:
    return re.compile(translate(pattern), re.DOTALL)


def match_wildcard(pattern: str, subject: str, ignore_case: bool = False) -> bool:
    """Whole-subject match; case folding applies to both sides."""
    if ignore_case:
        pattern = pattern.casefold()
        subject = subject.casefold()
    return _compiled(pattern).match(subject) is not None
