"""
Batch-incremental minimum spanning forest.

A batch is folded in by taking the compressed path tree over the batch's
endpoints, solving the MSF of that small graph together with the batch,
and applying the difference to the RC tree: compressed edges that lost
are cut, batch edges that won are linked.
"""

import logging
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from windowmsf.edges import EdgeClock, EdgeId, RawEdge, StreamEdge, VertexId, WeightKey, validate_batch, weight_key
from windowmsf.errors import EdgeNotInForestError, ForestError
from windowmsf.pathtree import compressed_path_trees
from windowmsf.rctree import RCTree
from windowmsf.unionfind import DisjointSet

logger = logging.getLogger(__name__)

KeyFunction = Callable[[StreamEdge], WeightKey]


class SmallEdge(NamedTuple):
    u: VertexId
    v: VertexId
    key: WeightKey


class BatchResult(NamedTuple):
    """Outcome of one batch_insert."""

    added: FrozenSet[EdgeId]
    evicted: FrozenSet[EdgeId]
    cpt_edges: FrozenSet[EdgeId]
    removed: Tuple[StreamEdge, ...] = ()  # the evicted edges themselves


EMPTY_RESULT = BatchResult(frozenset(), frozenset(), frozenset())


def msf_small(edges: Iterable[SmallEdge]) -> List[SmallEdge]:
    """Kruskal: the unique MSF under key order."""
    ds = DisjointSet()
    kept = []
    for edge in sorted(edges, key=lambda e: e.key):
        if ds.union(edge.u, edge.v):
            kept.append(edge)
    return kept


class MSForest:
    """Minimum spanning forest of every edge inserted and not deleted."""

    def __init__(self, n: int, seed: int = 0, key: KeyFunction = weight_key):
        self.n = n
        self.key = key
        self.rc = RCTree(n, seed)
        self._members: Dict[EdgeId, StreamEdge] = {}

    def batch_insert(self, batch: Sequence[StreamEdge]) -> BatchResult:
        """
        Insert a batch of edges.

        Returns:
            The batch edges that joined the forest, the forest edges they
            evicted, and the origins of the compressed path tree used.

        Raises:
            InvalidVertexError: if an endpoint is outside [0, n).
            ForestError: if an EdgeId is already in the forest.
        """
        if not batch:
            return EMPTY_RESULT
        validate_batch([(e.u, e.v, e.w) for e in batch], self.n)
        keys: Dict[EdgeId, WeightKey] = {}
        for e in batch:
            if e.id in self._members or e.id in keys:
                raise ForestError(f"edge {e.id} is already in the forest")
            keys[e.id] = self.key(e)

        endpoints = {x for e in batch for x in (e.u, e.v)}
        cpt = compressed_path_trees(self.rc, endpoints)
        small = [SmallEdge(c.a, c.b, c.key) for c in cpt.edges]
        small.extend(SmallEdge(e.u, e.v, keys[e.id]) for e in batch)
        kept = {edge.key.edge for edge in msf_small(small)}

        cpt_ids = frozenset(c.origin for c in cpt.edges)
        evicted = cpt_ids - kept
        added = frozenset(e.id for e in batch if e.id in kept)

        removed = tuple(self._members.pop(edge) for edge in sorted(evicted))
        if evicted:
            self.rc.batch_cut(sorted(evicted))
        if added:
            self.rc.batch_link([(e.u, e.v, keys[e.id], e.id) for e in batch if e.id in added])
            for e in batch:
                if e.id in added:
                    self._members[e.id] = e
        logger.debug("batch of %d: cpt %d vertices / %d edges, %d added, %d evicted",
                     len(batch), len(cpt.vertices), len(cpt.edges), len(added), len(evicted))
        return BatchResult(added, evicted, cpt_ids, removed)

    def batch_delete(self, edges: Iterable[EdgeId]) -> List[StreamEdge]:
        """
        Remove forest edges that have no replacement in the graph.

        Raises:
            EdgeNotInForestError: if an edge is not in the forest.
        """
        edges = list(edges)
        for edge in edges:
            if edge not in self._members:
                raise EdgeNotInForestError(edge)
        if not edges:
            return []
        self.rc.batch_cut(edges)
        return [self._members.pop(edge) for edge in edges]

    # --- Queries ---

    def heaviest_on_path(self, u: VertexId, v: VertexId) -> Optional[WeightKey]:
        return self.rc.path_max(u, v)

    def connected(self, u: VertexId, v: VertexId) -> bool:
        return self.rc.connected(u, v)

    def msf_edge_count(self) -> int:
        return len(self._members)

    def components(self) -> int:
        return self.n - len(self._members)

    def __contains__(self, edge: EdgeId) -> bool:
        return edge in self._members

    def edge(self, edge: EdgeId) -> StreamEdge:
        return self._members[edge]

    def edges(self) -> List[StreamEdge]:
        return [self._members[e] for e in sorted(self._members)]

    def edge_ids(self) -> FrozenSet[EdgeId]:
        return frozenset(self._members)

    def total_weight(self) -> int:
        return sum(e.w for e in self._members.values())


class StreamMSF(MSForest):
    """MSForest fed with raw (u, v, w) batches; arrival positions and ids come from a clock."""

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n, seed)
        self.clock = EdgeClock(n)

    def insert(self, batch: Sequence[RawEdge]) -> List[StreamEdge]:
        edges = self.clock.normalize_batch(batch)
        self.batch_insert(edges)
        return edges
