"""
Line-oriented stream format.

    insert u v w [u v w ...]
    expire D
    query NAME [args]
    check

Tokens are whitespace separated and '#' starts a comment.
"""

from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple

from windowmsf.errors import StreamParseError
from windowmsf.models import CheckCommand, ExpireCommand, InsertCommand, QueryCommand, StreamCommand


def _ints(tokens: List[str], line: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("-").isdigit())
        raise StreamParseError(line, f"expected an integer, got {bad!r}") from None


def parse_line(text: str, line: int) -> Optional[StreamCommand]:
    """
    Parse one line.

    Returns:
        The command, or None for blank and comment-only lines.

    Raises:
        StreamParseError: on malformed input.
    """
    tokens = text.split("#", 1)[0].split()
    if not tokens:
        return None
    head, rest = tokens[0].lower(), tokens[1:]
    if head == "insert":
        values = _ints(rest, line)
        if not values or len(values) % 3:
            raise StreamParseError(line, "insert takes one or more 'u v w' triples")
        edges = [tuple(values[i:i + 3]) for i in range(0, len(values), 3)]
        if any(u < 0 or v < 0 for u, v, _w in edges):
            raise StreamParseError(line, "vertices must be non-negative")
        return InsertCommand(edges=edges)
    if head == "expire":
        values = _ints(rest, line)
        if len(values) != 1 or values[0] < 0:
            raise StreamParseError(line, "expire takes one non-negative count")
        return ExpireCommand(delta=values[0])
    if head == "query":
        if not rest:
            raise StreamParseError(line, "query needs a name")
        return QueryCommand(name=rest[0].lower(), args=_ints(rest[1:], line))
    if head == "check":
        if rest:
            raise StreamParseError(line, "check takes no arguments")
        return CheckCommand()
    raise StreamParseError(line, f"unknown command {tokens[0]!r}")


def parse_stream(lines: Iterable[str]) -> Iterator[Tuple[int, StreamCommand]]:
    for number, text in enumerate(lines, start=1):
        command = parse_line(text, number)
        if command is not None:
            yield number, command


def format_command(command: StreamCommand) -> str:
    if command.kind == "insert":
        return "insert " + " ".join(f"{u} {v} {w}" for u, v, w in command.edges)
    if command.kind == "expire":
        return f"expire {command.delta}"
    if command.kind == "query":
        return " ".join(["query", command.name, *map(str, command.args)])
    return "check"


def format_bool(value: bool) -> str:
    return "true" if value else "false"


def format_fraction(value: Fraction) -> str:
    return f"{float(value):.6f}"
