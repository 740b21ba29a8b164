"""
CHECK: compare a structure with the oracles on the window rebuilt from
the command log. A check reads the structure and never changes it.
"""

import itertools
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Set

from windowmsf import oracle
from windowmsf.edges import StreamEdge
from windowmsf.errors import InvariantViolation
from windowmsf.models import StreamCommand, StructureParams
from windowmsf.oracle import WindowSnapshot

logger = logging.getLogger(__name__)

ALL_PAIRS_LIMIT = 64


def _ids_diff(label: str, got: Set[int], expected: Set[int]) -> Optional[str]:
    if got == expected:
        return None
    extra = sorted(got - expected)[:5]
    missing = sorted(expected - got)[:5]
    return f"{label}: extra {extra}, missing {missing}"


def _pairs(snapshot: WindowSnapshot) -> List[tuple]:
    n = snapshot.n
    if n <= ALL_PAIRS_LIMIT:
        return list(itertools.combinations(range(n), 2))
    pairs = {e.endpoints() for e in snapshot.edges}
    pairs.update((0, v) for v in range(1, n))
    return sorted(pairs)


def _connectivity_diff(snapshot: WindowSnapshot, is_connected: Callable[[int, int], bool]) -> Optional[str]:
    label = oracle.component_labels(snapshot.n, snapshot.edges)
    for u, v in _pairs(snapshot):
        expected = label[u] == label[v]
        if is_connected(u, v) != expected:
            return f"connected({u}, {v}) should be {str(expected).lower()}"
    return None


def check_msf(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    diff = _ids_diff("msf edges", set(structure.edge_ids()), oracle.kruskal_msf(snapshot.edges, "weight"))
    if diff:
        return diff
    try:
        structure.rc.validate(deep=snapshot.n <= ALL_PAIRS_LIMIT)
    except InvariantViolation as e:
        return f"rc tree: {e.detail}"
    return None


def check_conn(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    return _connectivity_diff(snapshot, structure.is_connected)


def check_conn_eager(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    diff = _ids_diff("window msf", set(structure.forest.msf.edge_ids()),
                     oracle.kruskal_msf(snapshot.edges, "window"))
    if diff:
        return diff
    expected = oracle.components_naive(snapshot.n, snapshot.edges)
    if structure.num_components() != expected:
        return f"components {structure.num_components()} should be {expected}"
    return _connectivity_diff(snapshot, structure.is_connected)


def check_bipartite(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    diff = _ids_diff("window msf", set(structure.graph.msf.edge_ids()),
                     oracle.kruskal_msf(snapshot.edges, "window"))
    if diff:
        return diff
    expected = oracle.bipartite_naive(snapshot.n, snapshot.edges)
    if structure.is_bipartite() != expected:
        return f"bipartite should be {str(expected).lower()}"
    return None


def check_amsf(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    for i, (threshold, count) in enumerate(zip(structure.thresholds, structure.components())):
        expected = oracle.level_components(snapshot.n, snapshot.edges, threshold)
        if count != expected:
            return f"level {i} components {count} should be {expected}"
    exact = oracle.msf_weight_exact(snapshot.edges)
    estimate = structure.weight()
    if not exact <= estimate <= (1 + structure.epsilon) * exact:
        return f"estimate {float(estimate):.6f} outside [{exact}, (1+eps)*{exact}]"
    return None


def _certificate_diff(stack: Any, edges: Sequence[StreamEdge], n: int, label: str) -> Optional[str]:
    expected = oracle.forest_decomposition(edges, stack.k, "window")
    for i, want in enumerate(expected):
        layer = stack.layer(i)
        got = set(layer.msf.edge_ids()) if layer is not None else set()
        diff = _ids_diff(f"{label} forest {i + 1}", got, want)
        if diff:
            return diff
    if stack.size() > stack.k * max(0, n - 1):
        return f"{label} has {stack.size()} edges, more than k(n-1)"
    return None


def check_kcert(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    diff = _certificate_diff(structure.stack, snapshot.edges, snapshot.n, "certificate")
    if diff:
        return diff
    if snapshot.n <= oracle.CUT_LIMIT:
        k = structure.k
        cert = structure.make_cert()
        full = dict(oracle.cut_enumerate(snapshot.n, snapshot.edges))
        for side, value in oracle.cut_enumerate(snapshot.n, cert):
            if min(k, value) != min(k, full[side]):
                return f"cut {sorted(side)}: certificate {value}, window {full[side]}"
    return None


def check_cyclefree(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    diff = check_kcert(structure, snapshot, params)
    if diff:
        return diff
    expected = oracle.has_cycle_naive(snapshot.n, snapshot.edges)
    if structure.has_cycle() != expected:
        return f"hascycle should be {str(expected).lower()}"
    return None


def _sampled_levels(structure: Any, snapshot: WindowSnapshot) -> Callable[[int, int], int]:
    """Level L(u, v) recomputed from the structure's coins on the window edges."""
    n = snapshot.n
    window = oracle.component_labels(n, snapshot.edges)
    ladders = [
        [oracle.component_labels(n, [e for e in snapshot.edges if structure.sample_level(e.id, j) >= i])
         for j in range(structure.repetitions)]
        for i in range(1, structure.levels + 1)
    ]

    def level(u: int, v: int) -> int:
        if window[u] != window[v]:
            return 0
        best = 0
        for i, labels in enumerate(ladders, start=1):
            if not all(label[u] == label[v] for label in labels):
                break
            best = i
        return best

    return level


def check_sparsifier(structure: Any, snapshot: WindowSnapshot, params: StructureParams) -> Optional[str]:
    heights = {e.id: structure.sample_level(e.id, structure.repetitions) for e in snapshot.edges}
    kept: List[Set[int]] = []
    for i, cert in enumerate(structure.certs):
        sample = [e for e in snapshot.edges if heights[e.id] >= i]
        diff = _certificate_diff(cert, sample, snapshot.n, f"Q_{i}")
        if diff:
            return diff
        kept.append({e.id for e in cert.edges()})

    level = _sampled_levels(structure, snapshot)
    expected: Dict[int, Fraction] = {}
    for e in snapshot.edges:
        if any(e.id in ids for ids in kept):
            beta = structure.sample_exponent(level(e.u, e.v))
            if e.id in kept[beta]:
                expected[e.id] = Fraction(2 ** beta)

    emitted = structure.sparsify()
    got = {edge.id: edge.weight for edge in emitted}
    if len(got) != len(emitted):
        return "sparsifier emits an edge twice"
    diff = _ids_diff("sparsifier edges", set(got), set(expected))
    if diff:
        return diff
    for edge in sorted(got):
        if got[edge] != expected[edge]:
            return f"edge {edge} has weight {got[edge]}, should be {expected[edge]}"
    return None


CHECKERS: Dict[str, Callable[[Any, WindowSnapshot, StructureParams], Optional[str]]] = {
    "msf": check_msf,
    "conn": check_conn,
    "conn-eager": check_conn_eager,
    "bipartite": check_bipartite,
    "amsf": check_amsf,
    "kcert": check_kcert,
    "cyclefree": check_cyclefree,
    "sparsifier": check_sparsifier,
}


def check(params: StructureParams, structure: Any, log: Sequence[StreamCommand]) -> Optional[str]:
    """
    Run the oracle comparison for a structure.

    Returns:
        None when everything agrees, else a one-line description of the first difference.
    """
    max_weight = params.max_weight if params.structure == "amsf" else None
    snapshot = WindowSnapshot.from_log(params.n, log, max_weight)
    diff = CHECKERS[params.structure](structure, snapshot, params)
    logger.debug("check over %d window edges: %s", len(snapshot.edges), diff or "ok")
    return diff
