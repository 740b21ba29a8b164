"""
Exception hierarchy for windowmsf.

Every error carries a human readable ``detail`` and the process exit code
the command line driver reports for it.
"""

from typing import Iterable, List, Optional


class WindowMSFError(Exception):
    """Base class for all errors raised by the library."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# --- Input errors ---

class InvalidVertexError(WindowMSFError):
    """An edge of a batch names a vertex outside [0, n)."""

    def __init__(self, index: Optional[int], vertex: int, n: int):
        where = f"edge {index}: " if index is not None else ""
        super().__init__(f"{where}vertex {vertex} is outside [0, {n})")
        self.index = index
        self.vertex = vertex
        self.n = n


class WeightOutOfRangeError(WindowMSFError):
    """An edge weight lies outside the range a structure was built for."""

    def __init__(self, index: int, weight: int, max_weight: int):
        super().__init__(f"edge {index}: weight {weight} is outside [1, {max_weight}]")
        self.index = index
        self.weight = weight


# --- Structural errors ---

class ForestError(WindowMSFError):
    """A forest operation would break the forest ("not a forest", "cycle", "absent edge")."""


class NotBinaryClusterError(WindowMSFError):
    """weight() was asked of a cluster without two boundaries."""


class EdgeNotInForestError(WindowMSFError):
    """batch_delete was given an edge that is not in the spanning forest."""

    def __init__(self, edge: int):
        super().__init__(f"edge {edge} is not in the spanning forest")
        self.edge = edge


class InvariantViolation(WindowMSFError):
    """The RC tree invariant walk found problems."""

    def __init__(self, problems: Iterable[str]):
        self.problems: List[str] = list(problems)
        shown = "; ".join(self.problems[:5])
        more = len(self.problems) - 5
        if more > 0:
            shown += f" (+{more} more)"
        super().__init__(shown)


class OracleLimitError(WindowMSFError):
    """A brute-force oracle was asked to work on too large an input."""


# --- Command line errors ---

class StreamParseError(WindowMSFError):
    """A stream line could not be parsed."""

    exit_code = 1

    def __init__(self, line: int, detail: str):
        super().__init__(f"line {line}: {detail}")
        self.line = line


class CheckFailure(WindowMSFError):
    """A structure disagreed with the oracle."""

    exit_code = 2

    def __init__(self, diff: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + diff)
        self.diff = diff
        self.line = line


class ConfigError(WindowMSFError):
    """Structure parameters are missing or invalid."""

    exit_code = 3
