"""
Edge model shared by every structure: identifiers, weight keys and the
arrival-order discipline of the sliding window.
"""

import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from windowmsf.errors import InvalidVertexError

logger = logging.getLogger(__name__)

VertexId = int
EdgeId = int
Weight = int

RawEdge = Tuple[int, int, int]


class WeightKey(NamedTuple):
    """Total order on edges: weight first, EdgeId breaks ties."""

    weight: Weight
    edge: EdgeId


class StreamEdge(NamedTuple):
    """An undirected weighted edge with its arrival position and identity."""

    u: VertexId
    v: VertexId
    w: Weight
    toa: int
    id: EdgeId

    def endpoints(self) -> Tuple[VertexId, VertexId]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


def weight_key(e: StreamEdge) -> WeightKey:
    return WeightKey(e.w, e.id)


def make_window_key(e: StreamEdge) -> WeightKey:
    """
    Key under which older edges are heavier.

    The weight is the negated arrival position, so the heaviest edge on
    any path is the oldest one.
    """
    return WeightKey(-e.toa, e.id)


def window_toa(key: WeightKey) -> int:
    """Inverse of make_window_key on the weight component."""
    return -key.weight


def heavier(a: Optional[WeightKey], b: Optional[WeightKey]) -> Optional[WeightKey]:
    """Maximum of two keys where None (a DUMMY edge, or an empty path) is the lightest."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a > b else b


class EdgeClock:
    """
    Hands out arrival positions and EdgeIds.

    Every input edge consumes one arrival position, self-loops included,
    so that expiry counts match the stream the user wrote. Only retained
    edges consume an EdgeId.
    """

    def __init__(self, n: int, first_toa: int = 0, first_id: int = 0):
        self.n = n
        self.next_toa = first_toa
        self.next_id = first_id

    def normalize_batch(self, edges: Sequence[RawEdge]) -> List[StreamEdge]:
        """
        Turn raw (u, v, w) triples into StreamEdges.

        Args:
            edges: the batch in arrival order

        Returns:
            The retained edges (self-loops dropped), with consecutive
            arrival positions and fresh EdgeIds.

        Raises:
            InvalidVertexError: if an endpoint is outside [0, n); nothing is consumed.
        """
        validate_batch(edges, self.n)
        out: List[StreamEdge] = []
        for u, v, w in edges:
            toa = self.next_toa
            self.next_toa += 1
            if u == v:
                continue
            out.append(StreamEdge(u, v, w, toa, self.next_id))
            self.next_id += 1
        dropped = len(edges) - len(out)
        if dropped:
            logger.debug("dropped %d self-loops from a batch of %d", dropped, len(edges))
        return out


def validate_batch(edges: Iterable[RawEdge], n: int) -> None:
    for index, (u, v, _w) in enumerate(edges):
        for x in (u, v):
            if x < 0 or x >= n:
                raise InvalidVertexError(index, x, n)


def normalize_batch(edges: Sequence[RawEdge], n: int, first_toa: int = 0, first_id: int = 0) -> List[StreamEdge]:
    """One-shot normalize_batch with a fresh clock."""
    return EdgeClock(n, first_toa, first_id).normalize_batch(edges)
