"""
Brute-force references.

Everything here recomputes from scratch with networkx and shares no
algorithmic code with the structures it checks. The window is rebuilt
from the operation log alone.
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.utils import UnionFind

from windowmsf.edges import EdgeId, StreamEdge, VertexId, WeightKey
from windowmsf.errors import OracleLimitError

CUT_LIMIT = 12
PATH_LIMIT = 2000

KeyedEdge = Tuple[VertexId, VertexId, WeightKey]


@dataclass
class WindowSnapshot:
    """The unexpired edges of a stream, rebuilt from its log."""

    n: int
    edges: List[StreamEdge] = field(default_factory=list)
    t_w: int = 0
    next_toa: int = 0

    @classmethod
    def from_log(cls, n: int, commands: Iterable[Any], max_weight: Optional[int] = None) -> "WindowSnapshot":
        """
        Replay insert and expire commands.

        Commands are either objects with a ``kind`` of "insert" (with
        ``edges``) or "expire" (with ``delta``), or plain
        ("insert", edges) / ("expire", delta) pairs; anything else is
        ignored. Every input edge takes an arrival position, every
        non-loop edge an id; with max_weight set, edges weighing outside
        [1, max_weight] are left out of the window.
        """
        toa = 0
        next_id = 0
        t_w = 0
        everything: List[StreamEdge] = []
        for command in commands:
            if isinstance(command, tuple):
                kind, payload = command
            else:
                kind = getattr(command, "kind", None)
                payload = getattr(command, "edges", None) if kind == "insert" else getattr(command, "delta", None)
            if kind == "insert":
                for u, v, w in payload:
                    position = toa
                    toa += 1
                    if u == v:
                        continue
                    edge_id = next_id
                    next_id += 1
                    if max_weight is not None and not 1 <= w <= max_weight:
                        continue
                    everything.append(StreamEdge(u, v, w, position, edge_id))
            elif kind == "expire":
                t_w = min(t_w + payload, toa)
        live = [e for e in everything if e.toa >= t_w]
        return cls(n, live, t_w, toa)


# --- Forests ---

def _sort_key(e: StreamEdge, key: str) -> Tuple[int, int]:
    if key == "window":
        return (-e.toa, e.id)
    return (e.w, e.id)


def kruskal_msf(edges: Iterable[StreamEdge], key: str = "weight") -> Set[EdgeId]:
    """Unique MSF by key ("weight": (w, id); "window": (-toa, id))."""
    uf = UnionFind()
    kept = set()
    for e in sorted(edges, key=lambda e: _sort_key(e, key)):
        if uf[e.u] != uf[e.v]:
            uf.union(e.u, e.v)
            kept.add(e.id)
    return kept


def forest_decomposition(edges: Iterable[StreamEdge], k: int, key: str = "window") -> List[Set[EdgeId]]:
    """F_1 = MSF(G), F_i = MSF(G minus F_1..F_{i-1})."""
    rest = list(edges)
    layers = []
    for _ in range(k):
        layer = kruskal_msf(rest, key)
        layers.append(layer)
        rest = [e for e in rest if e.id not in layer]
    return layers


def msf_weight_exact(edges: Iterable[StreamEdge]) -> int:
    edges = list(edges)
    chosen = kruskal_msf(edges, "weight")
    return sum(e.w for e in edges if e.id in chosen)


def path_max_naive(tree_edges: Sequence[KeyedEdge], u: VertexId, v: VertexId) -> Optional[WeightKey]:
    """Heaviest key on the u-v path of a forest given as (a, b, key) triples."""
    if u == v:
        return None
    g = nx.Graph()
    g.add_nodes_from((u, v))
    for a, b, key in tree_edges:
        g.add_edge(a, b, key=key)
    if g.number_of_nodes() > PATH_LIMIT:
        raise OracleLimitError(f"path oracle is limited to {PATH_LIMIT} vertices")
    try:
        path = nx.shortest_path(g, u, v)
    except nx.NetworkXNoPath:
        return None
    return max(g.edges[a, b]["key"] for a, b in zip(path, path[1:]))


# --- Connectivity ---

def _graph(n: int, edges: Iterable[StreamEdge]) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((e.u, e.v) for e in edges)
    return g


def component_labels(n: int, edges: Iterable[StreamEdge]) -> List[int]:
    label = [0] * n
    for index, component in enumerate(nx.connected_components(_graph(n, edges))):
        for x in component:
            label[x] = index
    return label


def connected_naive(n: int, edges: Iterable[StreamEdge], u: VertexId, v: VertexId) -> bool:
    return nx.has_path(_graph(n, edges), u, v)


def components_naive(n: int, edges: Iterable[StreamEdge]) -> int:
    return nx.number_connected_components(_graph(n, edges))


def pairwise_connectivity(n: int, edges: Iterable[StreamEdge]) -> Dict[Tuple[VertexId, VertexId], bool]:
    label = component_labels(n, edges)
    return {(a, b): label[a] == label[b] for a, b in itertools.combinations(range(n), 2)}


def bipartite_naive(n: int, edges: Iterable[StreamEdge]) -> bool:
    return nx.is_bipartite(nx.Graph(_graph(n, edges)))


def has_cycle_naive(n: int, edges: Iterable[StreamEdge]) -> bool:
    edges = list(edges)
    return len(edges) > n - components_naive(n, edges)


def level_components(n: int, edges: Iterable[StreamEdge], threshold: Any) -> int:
    return components_naive(n, [e for e in edges if e.w <= threshold])


# --- Cuts and flows ---

def cut_enumerate(n: int, edges: Iterable[StreamEdge],
                  weights: Optional[Dict[EdgeId, Any]] = None) -> List[Tuple[FrozenSet[VertexId], Any]]:
    """
    Every proper cut (S, V - S) with 0 in S and its value.

    Raises:
        OracleLimitError: for n above 12.
    """
    if n > CUT_LIMIT:
        raise OracleLimitError(f"cut enumeration is limited to {CUT_LIMIT} vertices")
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    for e in edges:
        g.add_edge(e.u, e.v, weight=1 if weights is None else weights[e.id])
    out = []
    rest = list(range(1, n))
    for size in range(0, n - 1):
        for chosen in itertools.combinations(rest, size):
            side = frozenset((0, *chosen))
            out.append((side, nx.cut_size(g, side, weight="weight")))
    return out


def maxflow_naive(n: int, edges: Iterable[StreamEdge], s: VertexId, t: VertexId) -> int:
    """Number of edge-disjoint s-t paths."""
    if n > PATH_LIMIT:
        raise OracleLimitError(f"flow oracle is limited to {PATH_LIMIT} vertices")
    multiplicity = Counter(e.endpoints() for e in edges)
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    for (a, b), count in multiplicity.items():
        g.add_edge(a, b, capacity=count)
        g.add_edge(b, a, capacity=count)
    return int(nx.maximum_flow_value(g, s, t))
