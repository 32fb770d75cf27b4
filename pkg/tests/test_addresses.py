from __future__ import annotations

import pytest

from sheetaudit.addresses import (
    Position,
    Rectangle,
    column_index,
    column_letters,
    parse_a1,
    parse_rectangle,
)


def test_column_letters_known_values():
    assert column_letters(0) == "A"
    assert column_letters(25) == "Z"
    assert column_letters(26) == "AA"
    assert column_letters(27) == "AB"
    assert column_letters(16383) == "XFD"


def test_letters_round_trip_is_bijective():
    seen = set()
    for index in range(16384):
        letters = column_letters(index)
        assert column_index(letters) == index
        seen.add(letters)
    assert len(seen) == 16384


@pytest.mark.parametrize(
    "text,col,row,col_abs,row_abs",
    [
        ("A1", 0, 0, False, False),
        ("K22", 10, 21, False, False),
        ("$B$5", 1, 4, True, True),
        ("C$9", 2, 8, False, True),
        ("$AA10", 26, 9, True, False),
    ],
)
def test_parse_a1(text, col, row, col_abs, row_abs):
    address = parse_a1(text)
    assert (address.column, address.row) == (col, row)
    assert (address.col_absolute, address.row_absolute) == (col_abs, row_abs)
    assert address.a1() == text


def test_parse_a1_rejects_garbage():
    for bad in ("", "11", "A", "A0", "$$A1", "A1:B2"):
        with pytest.raises(ValueError):
            parse_a1(bad)


def test_rectangle_contains_and_intersection():
    rect = parse_rectangle("B2:D5")
    assert rect.contains(1, 1) and rect.contains(4, 3)
    assert not rect.contains(0, 1) and not rect.contains(1, 4)
    other = parse_rectangle("C4:F9")
    assert rect.intersection(other) == Rectangle(3, 2, 4, 3)
    assert rect.intersection(parse_rectangle("H1:H2")) is None
    assert parse_rectangle("K22") == Rectangle(21, 10, 21, 10)
    # corners in any order normalize
    assert parse_rectangle("D5:B2") == rect


def test_position_display():
    assert Position("S", "row", 16).display() == "17"
    assert Position("S", "column", 2).display() == "C"
    with pytest.raises(ValueError):
        Position("S", "diagonal", 1)


def test_address_key_ignores_absolute_markers():
    assert parse_a1("$K$22", "S").key() == parse_a1("K22", "S").key()
