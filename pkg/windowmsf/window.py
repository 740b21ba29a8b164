"""
Sliding-window graph structures.

Every structure sees the stream as batches of insertions and expirations
of the oldest edges. Spanning forests are kept under window keys, where
an edge's weight is its negated arrival position, so the heaviest edge
on a forest path is its oldest one.

Lazy structures never delete: u and v are connected in the window iff
the oldest edge on their forest path has not expired. Eager structures
delete expired forest edges as the window moves; no replacement edge is
ever needed because any edge that could replace an expired one is older
still.
"""

import hashlib
import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from sortedcontainers import SortedList

from windowmsf.edges import EdgeClock, EdgeId, RawEdge, StreamEdge, VertexId, make_window_key, validate_batch, window_toa
from windowmsf.errors import ConfigError, InvalidVertexError, WeightOutOfRangeError, WindowMSFError
from windowmsf.msf import BatchResult, MSForest

logger = logging.getLogger(__name__)


class InsertReport(NamedTuple):
    accepted: List[StreamEdge]
    rejected: List[int]  # batch indices


class WindowCore:
    """Arrival counter and left boundary T_W of the window."""

    def __init__(self, n: int):
        self.n = n
        self.clock = EdgeClock(n)
        self.t_w = 0

    @property
    def next_toa(self) -> int:
        return self.clock.next_toa

    def admit(self, batch: Sequence[RawEdge]) -> List[StreamEdge]:
        return self.clock.normalize_batch(batch)

    def advance(self, delta: int) -> int:
        """Expire the delta oldest arrival positions; T_W never passes the next arrival."""
        if delta < 0:
            raise WindowMSFError(f"cannot expire a negative count ({delta})")
        self.t_w = min(self.t_w + delta, self.next_toa)
        logger.debug("window now starts at toa %d", self.t_w)
        return self.t_w

    def check_vertex(self, v: VertexId) -> None:
        if v < 0 or v >= self.n:
            raise InvalidVertexError(None, v, self.n)


class OrderedEdgeSet:
    """Forest edges ordered by arrival."""

    def __init__(self):
        self._items = SortedList()

    def add_all(self, edges: Iterable[StreamEdge]) -> None:
        self._items.update((e.toa, e.id) for e in edges)

    def discard_all(self, edges: Iterable[StreamEdge]) -> None:
        for e in edges:
            self._items.discard((e.toa, e.id))

    def split_before(self, t_w: int) -> List[Tuple[int, EdgeId]]:
        """Remove and return every (toa, id) with toa < t_w."""
        cut = self._items.bisect_left((t_w, -1))
        expired = list(self._items[:cut])
        del self._items[:cut]
        return expired

    def ids(self) -> List[EdgeId]:
        return [edge for _toa, edge in self._items]

    def __contains__(self, item: Tuple[int, EdgeId]) -> bool:
        return item in self._items

    def __len__(self) -> int:
        return len(self._items)


def window_connected(forest: MSForest, t_w: int, u: VertexId, v: VertexId) -> bool:
    """Recent-edge test on a lazy forest."""
    if u == v:
        return True
    key = forest.heaviest_on_path(u, v)
    return key is not None and window_toa(key) >= t_w


class EagerForest:
    """Window-keyed spanning forest that drops edges as they expire."""

    def __init__(self, n: int, seed: int = 0):
        self.n = n
        self.msf = MSForest(n, seed, key=make_window_key)
        self.live = OrderedEdgeSet()

    def insert(self, edges: Sequence[StreamEdge]) -> BatchResult:
        result = self.msf.batch_insert(edges)
        self.live.discard_all(result.removed)
        self.live.add_all(e for e in edges if e.id in result.added)
        return result

    def expire_before(self, t_w: int) -> List[EdgeId]:
        gone = [edge for _toa, edge in self.live.split_before(t_w)]
        if gone:
            self.msf.batch_delete(gone)
        return gone

    def num_components(self) -> int:
        return self.n - len(self.live)

    def connected(self, u: VertexId, v: VertexId) -> bool:
        return self.msf.connected(u, v)

    def edges(self) -> List[StreamEdge]:
        return self.msf.edges()

    def __contains__(self, edge: EdgeId) -> bool:
        return edge in self.msf

    def __len__(self) -> int:
        return len(self.live)


class WindowStructure(ABC):
    """Common insert/expire plumbing."""

    name = ""

    def __init__(self, n: int):
        if n < 1:
            raise ConfigError("n must be at least 1")
        self.n = n
        self.core = WindowCore(n)

    @property
    def t_w(self) -> int:
        return self.core.t_w

    def insert(self, batch: Sequence[RawEdge]) -> InsertReport:
        edges = self.core.admit(batch)
        self._apply(edges)
        return InsertReport(edges, [])

    def expire(self, delta: int) -> int:
        t_w = self.core.advance(delta)
        self._expire_before(t_w)
        return t_w

    @abstractmethod
    def _apply(self, edges: List[StreamEdge]) -> None:
        ...

    def _expire_before(self, t_w: int) -> None:
        pass


# --- Connectivity ---

class SlidingConnectivity(WindowStructure):
    """Lazy window connectivity: O(n) space, nothing is ever deleted."""

    name = "conn"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.msf = MSForest(n, seed, key=make_window_key)

    def _apply(self, edges: List[StreamEdge]) -> None:
        self.msf.batch_insert(edges)

    def is_connected(self, u: VertexId, v: VertexId) -> bool:
        self.core.check_vertex(u)
        self.core.check_vertex(v)
        return window_connected(self.msf, self.t_w, u, v)


class EagerConnectivity(WindowStructure):
    """Window connectivity that also counts components."""

    name = "conn-eager"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.forest = EagerForest(n, seed)

    def _apply(self, edges: List[StreamEdge]) -> None:
        self.forest.insert(edges)

    def _expire_before(self, t_w: int) -> None:
        self.forest.expire_before(t_w)

    def num_components(self) -> int:
        return self.forest.num_components()

    def is_connected(self, u: VertexId, v: VertexId) -> bool:
        self.core.check_vertex(u)
        self.core.check_vertex(v)
        return u == v or self.forest.connected(u, v)


class BipartitenessMonitor(WindowStructure):
    """
    Bipartiteness through the double cover: each vertex x gets a twin
    x + n and each edge (u, v) becomes (u, v + n) and (u + n, v). The
    window graph is bipartite iff the cover has exactly twice as many
    components.
    """

    name = "bipartite"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.graph = EagerForest(n, seed)
        self.cover = EagerForest(2 * n, seed + 1)

    def _apply(self, edges: List[StreamEdge]) -> None:
        self.graph.insert(edges)
        n = self.n
        twins = []
        for e in edges:
            twins.append(StreamEdge(e.u, e.v + n, e.w, e.toa, 2 * e.id))
            twins.append(StreamEdge(e.u + n, e.v, e.w, e.toa, 2 * e.id + 1))
        self.cover.insert(twins)

    def _expire_before(self, t_w: int) -> None:
        self.graph.expire_before(t_w)
        self.cover.expire_before(t_w)

    def is_bipartite(self) -> bool:
        return self.cover.num_components() == 2 * self.graph.num_components()


# --- Approximate MSF weight ---

def to_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    """Exact value of a decimal written as float or text (0.1 -> 1/10)."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


class ApproximateMSFWeight(WindowStructure):
    """
    (1 + epsilon)-approximate MSF weight of the window.

    Level i holds the connectivity of the window restricted to weights at
    most (1 + epsilon)^i; the estimate charges every edge that merges two
    components at level i but not at level i - 1 the weight (1 + epsilon)^i.
    """

    name = "amsf"

    def __init__(self, n: int, epsilon: Union[float, str, Fraction] = 0.5, max_weight: int = 64,
                 seed: int = 0, strict: bool = False):
        super().__init__(n)
        self.epsilon = to_fraction(epsilon)
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        if max_weight < 1:
            raise ConfigError("max_weight must be at least 1")
        self.max_weight = max_weight
        self.strict = strict
        self.thresholds: List[Fraction] = [Fraction(1)]
        while self.thresholds[-1] < max_weight:
            self.thresholds.append(self.thresholds[-1] * (1 + self.epsilon))
        self.levels = [EagerForest(n, seed + i) for i in range(len(self.thresholds))]
        self.rejected_total = 0

    def insert(self, batch: Sequence[RawEdge]) -> InsertReport:
        """
        Insert a batch; out-of-range weights are rejected.

        Rejected edges still consume their arrival position.

        Raises:
            WeightOutOfRangeError: on the first out-of-range weight, in strict mode only.
        """
        validate_batch(batch, self.n)
        rejected = [i for i, (_u, _v, w) in enumerate(batch) if not 1 <= w <= self.max_weight]
        if rejected and self.strict:
            i = rejected[0]
            raise WeightOutOfRangeError(i, batch[i][2], self.max_weight)
        edges = self.core.admit(batch)
        accepted = [e for e in edges if 1 <= e.w <= self.max_weight]
        if rejected:
            self.rejected_total += len(rejected)
            logger.warning("rejected %d edges with weights outside [1, %d]", len(rejected), self.max_weight)
        self._apply(accepted)
        return InsertReport(accepted, rejected)

    def _apply(self, edges: List[StreamEdge]) -> None:
        for threshold, level in zip(self.thresholds, self.levels):
            chosen = [e for e in edges if e.w <= threshold]
            if chosen:
                level.insert(chosen)

    def _expire_before(self, t_w: int) -> None:
        for level in self.levels:
            level.expire_before(t_w)

    def components(self) -> List[int]:
        return [level.num_components() for level in self.levels]

    def weight(self) -> Fraction:
        counts = self.components()
        total = Fraction(self.n - counts[0])
        for i in range(1, len(counts)):
            total += (counts[i - 1] - counts[i]) * self.thresholds[i]
        return total


# --- k-certificates ---

class CertificateStack:
    """
    Maximal spanning forests F_1..F_k of the window, each the forest of
    what the previous ones left over. Created on demand.
    """

    def __init__(self, n: int, k: int, seed: int = 0):
        if k < 1:
            raise ConfigError("k must be at least 1")
        self.n = n
        self.k = k
        self.seed = seed
        self.layers: List[EagerForest] = []

    def insert(self, edges: Sequence[StreamEdge]) -> None:
        pending = sorted(edges, key=lambda e: e.id)
        for i in range(self.k):
            if not pending:
                return
            if i == len(self.layers):
                self.layers.append(EagerForest(self.n, self.seed + i))
            result = self.layers[i].insert(pending)
            leftover = [e for e in pending if e.id not in result.added]
            pending = sorted([*result.removed, *leftover], key=lambda e: e.id)
        if pending:
            logger.debug("dropped %d edges covered by all %d forests", len(pending), self.k)

    def expire_before(self, t_w: int) -> None:
        for layer in self.layers:
            layer.expire_before(t_w)

    def layer(self, i: int) -> Optional[EagerForest]:
        return self.layers[i] if i < len(self.layers) else None

    def contains(self, edge: EdgeId) -> bool:
        return any(edge in layer for layer in self.layers)

    def edges(self) -> List[StreamEdge]:
        out = [e for layer in self.layers for e in layer.edges()]
        out.sort(key=lambda e: e.id)
        return out

    def size(self) -> int:
        return sum(len(layer) for layer in self.layers)


class KCertificate(WindowStructure):
    """k-certificate of the window: keeps every cut of value at most k."""

    name = "kcert"

    def __init__(self, n: int, k: int = 2, seed: int = 0):
        super().__init__(n)
        self.k = k
        self.stack = CertificateStack(n, k, seed)

    def _apply(self, edges: List[StreamEdge]) -> None:
        self.stack.insert(edges)

    def _expire_before(self, t_w: int) -> None:
        self.stack.expire_before(t_w)

    def make_cert(self) -> List[StreamEdge]:
        return self.stack.edges()

    def cert_size(self) -> int:
        return self.stack.size()

    def forest(self, i: int) -> List[StreamEdge]:
        """Edges of F_i, 1-based."""
        if not 1 <= i <= self.k:
            raise WindowMSFError(f"forest index {i} is outside [1, {self.k}]")
        layer = self.stack.layer(i - 1)
        return layer.edges() if layer is not None else []

    def connectivity_lower_bound(self, u: VertexId, v: VertexId) -> int:
        """Largest i with u and v connected in F_i; there are at least i edge-disjoint u-v paths."""
        self.core.check_vertex(u)
        self.core.check_vertex(v)
        if u == v:
            return self.k
        best = 0
        for i, layer in enumerate(self.stack.layers, start=1):
            if layer.connected(u, v):
                best = i
        return best


class CycleMonitor(KCertificate):
    """The window has a cycle iff the second forest is nonempty."""

    name = "cyclefree"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n, 2, seed)

    def has_cycle(self) -> bool:
        second = self.stack.layer(1)
        return second is not None and len(second) > 0


# --- Cut sparsifier ---

class SparsifiedEdge(NamedTuple):
    u: VertexId
    v: VertexId
    id: EdgeId
    weight: Fraction


def default_log(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def default_cert_size(n: int, epsilon: float, cert_constant: float) -> int:
    lg = math.log2(n) if n > 1 else 0.0
    return max(1, math.ceil(cert_constant * lg ** 3 / epsilon ** 2))


class CutSparsifier(WindowStructure):
    """
    Cut sparsifier of the window.

    Repetition j samples the window into levels G_1^(j) ⊇ G_2^(j) ⊇ ...,
    an edge surviving to level i with probability 2^-i; level 0 is the
    window itself. An independent sample H_0 ⊇ H_1 ⊇ ... feeds one
    k-certificate Q_i per level. At query time an edge's level L(e), the
    deepest level at which its endpoints stay connected in every
    repetition, stands in for its edge connectivity and picks the sample
    it is read from.
    """

    name = "sparsifier"

    def __init__(self, n: int, epsilon: float = 0.5, seed: int = 0, repetitions: Optional[int] = None,
                 levels: Optional[int] = None, k: Optional[int] = None,
                 cert_constant: float = 1.0, sample_constant: float = 1.0):
        super().__init__(n)
        if epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        if sample_constant <= 0 or cert_constant <= 0:
            raise ConfigError("sparsifier constants must be positive")
        self.epsilon = float(epsilon)
        self.repetitions = repetitions or default_log(n)
        self.levels = levels or default_log(n)
        self.k = k or default_cert_size(n, self.epsilon, cert_constant)
        if self.repetitions < 1 or self.levels < 1 or self.k < 1:
            raise ConfigError("K, L and k must be at least 1")
        self.sample_constant = sample_constant
        self._log_n = max(1.0, math.log2(n)) if n > 1 else 1.0
        self._coin_key = hashlib.blake2b(b"sparsifier:%d" % seed, digest_size=32).digest()
        self.base = MSForest(n, seed, key=make_window_key)
        self.ladders: List[List[MSForest]] = [
            [MSForest(n, seed + 1 + j * self.levels + i, key=make_window_key) for i in range(self.levels)]
            for j in range(self.repetitions)
        ]
        self.certs = [CertificateStack(n, self.k, seed + 7919 * (i + 1)) for i in range(self.levels + 1)]

    def sample_level(self, edge: EdgeId, repetition: int) -> int:
        """Number of consecutive heads for (edge, repetition), capped at L."""
        digest = hashlib.blake2b(b"%d:%d" % (edge, repetition), digest_size=8, key=self._coin_key).digest()
        bits = int.from_bytes(digest, "little")
        g = 0
        while g < self.levels and bits >> g & 1:
            g += 1
        return g

    def _apply(self, edges: List[StreamEdge]) -> None:
        if not edges:
            return
        self.base.batch_insert(edges)
        for j, ladder in enumerate(self.ladders):
            heights = {e.id: self.sample_level(e.id, j) for e in edges}
            for i, forest in enumerate(ladder, start=1):
                chosen = [e for e in edges if heights[e.id] >= i]
                if not chosen:
                    break
                forest.batch_insert(chosen)
        heights = {e.id: self.sample_level(e.id, self.repetitions) for e in edges}
        for i, cert in enumerate(self.certs):
            chosen = [e for e in edges if heights[e.id] >= i]
            if not chosen:
                break
            cert.insert(chosen)

    def _expire_before(self, t_w: int) -> None:
        for cert in self.certs:
            cert.expire_before(t_w)

    def level(self, u: VertexId, v: VertexId) -> int:
        """Deepest level at which u and v are connected in every repetition."""
        self.core.check_vertex(u)
        self.core.check_vertex(v)
        if not window_connected(self.base, self.t_w, u, v):
            return 0
        best = 0
        for i in range(1, self.levels + 1):
            if all(window_connected(ladder[i - 1], self.t_w, u, v) for ladder in self.ladders):
                best = i
            else:
                break
        return best

    def sample_exponent(self, level: int) -> int:
        """floor(log2(1 / p)) for p = min(1, c log2(n)^2 / (epsilon^2 2^level)), capped at L."""
        ratio = self.epsilon ** 2 * 2.0 ** level / (self.sample_constant * self._log_n ** 2)
        if ratio <= 1:
            return 0
        return min(self.levels, math.floor(math.log2(ratio)))

    def sparsify(self) -> List[SparsifiedEdge]:
        candidates: Dict[EdgeId, StreamEdge] = {}
        for cert in self.certs:
            for e in cert.edges():
                candidates[e.id] = e
        out = []
        for e in candidates.values():
            beta = self.sample_exponent(self.level(e.u, e.v))
            if self.certs[beta].contains(e.id):
                u, v = e.endpoints()
                out.append(SparsifiedEdge(u, v, e.id, Fraction(2 ** beta)))
        out.sort(key=lambda s: (s.u, s.v, s.id))
        return out
