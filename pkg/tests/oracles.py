"""Independent reference implementations the tests check against.

Everything here is deliberately written the slow, obvious way and shares
no code with the package: backtracking instead of compiled patterns,
direct recursion instead of folding, cell enumeration instead of
rectangle arithmetic.
"""

from __future__ import annotations


def backtrack_match(pattern: str, subject: str) -> bool:
    """Exhaustive wildcard matching: '*' tries every alignment."""
    if not pattern:
        return not subject
    head = pattern[0]
    if head == "*":
        for split in range(len(subject) + 1):
            if backtrack_match(pattern[1:], subject[split:]):
                return True
        return False
    if not subject:
        return False
    if head == "?" or head == subject[0]:
        return backtrack_match(pattern[1:], subject[1:])
    return False


def match_vector(pattern: str, subjects_padded, lengths):
    """The same all-alignments recurrence as backtrack_match, tabulated
    with numpy across many subjects at once (for exhaustive sweeps).

    `subjects_padded` is a (n, width) array of byte codes, `lengths` the
    true subject lengths. Returns a boolean vector: pattern matches
    subject i.
    """
    import numpy as np

    n, width = subjects_padded.shape
    # state[i, j] = pattern-so-far matches first j characters of subject i
    state = np.zeros((n, width + 1), dtype=bool)
    state[:, 0] = True
    positions = np.arange(width)
    for ch in pattern:
        if ch == "*":
            state = np.logical_or.accumulate(state, axis=1)
            continue
        nxt = np.zeros_like(state)
        if ch == "?":
            can = positions < lengths[:, None]
        else:
            can = subjects_padded == ord(ch)
        nxt[:, 1:] = state[:, :-1] & can
        state = nxt
    return state[np.arange(n), lengths]


class NumError(ArithmeticError):
    """Raised where a spreadsheet would show #NUM! (no complex values)."""


def evaluate_node(node):
    """Straight recursive evaluation of operator-only formula trees.

    Returns a Python value, or raises ZeroDivisionError / NumError just
    like spreadsheet arithmetic would.
    """
    from sheetaudit import formulas as f

    if isinstance(node, f.Number):
        return node.value
    if isinstance(node, f.Text):
        return node.value
    if isinstance(node, f.Boolean):
        return node.value
    if isinstance(node, f.Unary):
        value = evaluate_node(node.operand)
        return -value if node.op == "-" else value / 100
    if isinstance(node, f.Binary):
        left = evaluate_node(node.left)
        right = evaluate_node(node.right)
        op = node.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return left / right
        if op == "^":
            result = left ** right
            if isinstance(result, complex):
                raise NumError
            return result
        if op == "&":
            return _text(left) + _text(right)
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
        if op == ">=":
            return left >= right
    raise AssertionError(f"not an operator-only node: {node!r}")


def _text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))


def cells_of_range(a1_range: str) -> set[tuple[int, int]]:
    """Every (row, col) inside an A1 rectangle, by brute enumeration."""
    from sheetaudit.addresses import parse_a1

    if ":" in a1_range:
        start_text, end_text = a1_range.split(":")
    else:
        start_text = end_text = a1_range
    a, b = parse_a1(start_text), parse_a1(end_text)
    rows = range(min(a.row, b.row), max(a.row, b.row) + 1)
    cols = range(min(a.column, b.column), max(a.column, b.column) + 1)
    return {(r, c) for r in rows for c in cols}
