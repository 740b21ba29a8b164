from fractions import Fraction

import pytest

from windowmsf.errors import StreamParseError
from windowmsf.models import CheckCommand, ExpireCommand, InsertCommand, QueryCommand
from windowmsf.stream import format_command, format_fraction, parse_line, parse_stream


def test_insert_line():
    assert parse_line("insert 0 1 5 2 3 7", 1) == InsertCommand(edges=[(0, 1, 5), (2, 3, 7)])


def test_comments_and_blank_lines():
    assert parse_line("   # nothing here", 1) is None
    assert parse_line("", 2) is None
    assert parse_line("EXPIRE 3  # three oldest", 3) == ExpireCommand(delta=3)


def test_query_and_check():
    assert parse_line("query pathmax 0 4", 1) == QueryCommand(name="pathmax", args=[0, 4])
    assert parse_line("check", 1) == CheckCommand()


@pytest.mark.parametrize("text", [
    "insert 0 1",
    "insert",
    "insert 0 x 1",
    "insert -1 2 3",
    "expire",
    "expire -2",
    "expire 1 2",
    "query",
    "check now",
    "delete 0 1",
])
def test_malformed_lines(text):
    with pytest.raises(StreamParseError) as info:
        parse_line(text, 7)
    assert info.value.line == 7
    assert info.value.exit_code == 1


def test_parse_stream_numbers_lines():
    lines = ["# header", "insert 0 1 1", "", "check"]
    assert [(line, c.kind) for line, c in parse_stream(lines)] == [(2, "insert"), (4, "check")]


def test_format_command_reads_back():
    for text in ("insert 0 1 5 2 3 7", "expire 4", "query connected 1 2", "check"):
        assert format_command(parse_line(text, 1)) == text


def test_format_fraction():
    assert format_fraction(Fraction(5, 2)) == "2.500000"
    assert format_fraction(Fraction(1, 3)) == "0.333333"
