"""Random inputs shared by the tests."""

import random
from typing import Dict, List, Set, Tuple

from windowmsf.contraction import Cluster, ClusterKind
from windowmsf.edges import StreamEdge, WeightKey

LinkEdge = Tuple[int, int, WeightKey, int]


def random_tree_edges(rng: random.Random, n: int, max_weight: int = 100, first_id: int = 0,
                      hubs: int = 0) -> List[LinkEdge]:
    """Random recursive tree on shuffled labels; with hubs, parents are drawn from the first few vertices."""
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for i in range(1, n):
        parent = order[rng.randrange(min(i, hubs) if hubs else i)]
        eid = first_id + i - 1
        edges.append((order[i], parent, WeightKey(rng.randint(1, max_weight), eid), eid))
    return edges


def random_forest_edges(rng: random.Random, n: int, keep: float = 0.7, **kwargs) -> List[LinkEdge]:
    return [e for e in random_tree_edges(rng, n, **kwargs) if rng.random() < keep]


def keyed(edges: List[LinkEdge]) -> List[Tuple[int, int, WeightKey]]:
    return [(u, v, key) for u, v, key, _eid in edges]


def random_batches(rng: random.Random, n: int, count: int, max_batch: int,
                   max_weight: int = 100) -> List[List[Tuple[int, int, int]]]:
    return [
        [(rng.randrange(n), rng.randrange(n), rng.randint(1, max_weight)) for _ in range(rng.randint(1, max_batch))]
        for _ in range(count)
    ]


def stream_edges(raw: List[Tuple[int, int, int]], first_id: int = 0) -> List[StreamEdge]:
    """StreamEdges with arrival position equal to id."""
    return [StreamEdge(u, v, w, first_id + i, first_id + i) for i, (u, v, w) in enumerate(raw)]


def leaf_sites(cluster: Cluster, memo: Dict[int, Set[int]]) -> Set[int]:
    """Sites of the VERTEX leaves below a cluster."""
    key = id(cluster)
    if key not in memo:
        if cluster.kind is ClusterKind.VERTEX:
            memo[key] = {cluster.site}
        else:
            out: Set[int] = set()
            for child in cluster.children:
                out |= leaf_sites(child, memo)
            memo[key] = out
    return memo[key]
