"""
Randomized tree contraction over a bounded-degree site forest, and the
rake-compress (RC) tree of clusters it induces.

Contraction runs in synchronous rounds. In round r every live site looks
at its own degree and its neighbours' degrees:

* degree 0: the site finalizes into a Nullary root cluster;
* degree 1: the site rakes into its neighbour, unless the neighbour is a
  leaf too and has the larger id;
* degree 2, neither neighbour a leaf: the site compresses when its coin
  for (site, r) is heads and every degree-2 neighbour's coin is tails;
* otherwise the site stays for round r + 1.

Coins come from a keyed hash, so the contraction is a pure function of
the site forest and the seed. Updates exploit that: they re-decide only
the sites whose round state or neighbourhood changed and reuse every
other cluster object as is.
"""

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from windowmsf.edges import WeightKey, heavier
from windowmsf.errors import ForestError, InvariantViolation, NotBinaryClusterError

logger = logging.getLogger(__name__)

Site = int
Move = Tuple  # ("stay",) | ("final",) | ("rake", into) | ("compress", left, right)

STAY: Move = ("stay",)
FINAL: Move = ("final",)


class ClusterKind(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    UNARY = "unary"
    BINARY = "binary"
    NULLARY = "nullary"


BOUNDARY_COUNT = {
    ClusterKind.VERTEX: 0,
    ClusterKind.EDGE: 2,
    ClusterKind.UNARY: 1,
    ClusterKind.BINARY: 2,
    ClusterKind.NULLARY: 0,
}


@dataclass(eq=False)
class Cluster:
    """A node of the RC tree."""

    kind: ClusterKind
    boundary: Tuple[Site, ...] = ()
    representative: Optional[Site] = None
    children: Tuple["Cluster", ...] = ()
    pathmax: Optional[WeightKey] = None
    site: Optional[Site] = None  # set on VERTEX leaves only
    round: int = -1
    parent: Optional["Cluster"] = field(default=None, repr=False)
    marked: bool = False

    @property
    def is_leaf(self) -> bool:
        return self.kind in (ClusterKind.VERTEX, ClusterKind.EDGE)

    @property
    def is_binary(self) -> bool:
        return len(self.boundary) == 2

    def weight(self) -> Optional[WeightKey]:
        """Heaviest key between the two boundaries; None if the path is all DUMMY edges."""
        if not self.is_binary:
            raise NotBinaryClusterError(f"{self.kind.value} cluster has no boundary-to-boundary path")
        return self.pathmax


# --- Cluster primitives ---

def boundary(cluster: Cluster) -> Tuple[Site, ...]:
    return cluster.boundary


def children(cluster: Cluster) -> Tuple[Cluster, ...]:
    return cluster.children


def representative(cluster: Cluster) -> Optional[Site]:
    return cluster.representative


def weight(cluster: Cluster) -> Optional[WeightKey]:
    return cluster.weight()


@dataclass
class SiteRound:
    """What a live site holds at the start of a round."""

    adj: Dict[Site, Cluster]
    raked: Tuple[Cluster, ...] = ()

    def same_as(self, other: "SiteRound") -> bool:
        if len(self.adj) != len(other.adj) or len(self.raked) != len(other.raked):
            return False
        for x, cluster in self.adj.items():
            if other.adj.get(x) is not cluster:
                return False
        return all(a is b for a, b in zip(self.raked, other.raked))


class Contraction:
    """Round-tagged contraction state of a site forest and its RC tree."""

    MAX_DEGREE = 3

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._coin_key = hashlib.blake2b(str(seed).encode(), digest_size=32).digest()
        self._rounds: List[Dict[Site, SiteRound]] = [{}]
        self._leaves: Dict[Site, Cluster] = {}
        self._edge_leaves: Dict[Tuple[Site, Site], Cluster] = {}
        self._contracted: Dict[Site, Tuple[int, Move, Cluster]] = {}
        self._roots: Dict[Site, Cluster] = {}
        self.last_affected = 0

    # --- Queries ---

    def leaf(self, site: Site) -> Cluster:
        return self._leaves[site]

    def roots(self) -> List[Cluster]:
        return [self._roots[s] for s in sorted(self._roots)]

    def root_of(self, site: Site) -> Cluster:
        cluster = self._leaves[site]
        while cluster.parent is not None:
            cluster = cluster.parent
        return cluster

    def coin(self, site: Site, rnd: int) -> bool:
        digest = hashlib.blake2b(b"%d:%d" % (site, rnd), digest_size=1, key=self._coin_key).digest()
        return bool(digest[0] & 1)

    def signature(self) -> Tuple[Tuple[Site, int, Move], ...]:
        """Every site's contraction round and move; equal signatures mean identical clusterings."""
        return tuple(sorted((s, rnd, move) for s, (rnd, move, _c) in self._contracted.items()))

    def clusters(self) -> Iterator[Cluster]:
        """All clusters, top-down from each root."""
        stack = list(reversed(self.roots()))
        while stack:
            cluster = stack.pop()
            yield cluster
            stack.extend(reversed(cluster.children))

    def height(self) -> int:
        best = 0
        for leaf in self._leaves.values():
            depth, cluster = 0, leaf
            while cluster.parent is not None:
                cluster = cluster.parent
                depth += 1
            best = max(best, depth)
        return best

    # --- Updates ---

    def update(self, new_sites: Iterable[Site] = (), cuts: Iterable[Tuple[Site, Site]] = (),
               links: Iterable[Tuple[Site, Site, Optional[WeightKey]]] = ()) -> None:
        """
        Apply site insertions, edge cuts and edge links, then propagate.

        The caller guarantees the result is a forest; the degree bound is
        checked here.
        """
        base = self._rounds[0]
        changed: Set[Site] = set()
        for s in new_sites:
            if s in self._leaves:
                raise ForestError(f"site {s} already exists")
            self._leaves[s] = Cluster(ClusterKind.VERTEX, site=s)
            base[s] = SiteRound({})
            changed.add(s)
        for a, b in cuts:
            pair = (a, b) if a < b else (b, a)
            if self._edge_leaves.pop(pair, None) is None:
                raise ForestError(f"absent edge between sites {a} and {b}")
            del base[a].adj[b]
            del base[b].adj[a]
            changed.update(pair)
        for a, b, key in links:
            pair = (a, b) if a < b else (b, a)
            if pair in self._edge_leaves:
                raise ForestError(f"sites {a} and {b} are already adjacent")
            leaf = Cluster(ClusterKind.EDGE, boundary=pair, pathmax=key)
            self._edge_leaves[pair] = leaf
            base[a].adj[b] = leaf
            base[b].adj[a] = leaf
            changed.update(pair)
        for s in changed:
            if len(base[s].adj) > self.MAX_DEGREE:
                raise ForestError(f"site {s} would have degree {len(base[s].adj)}")
        self._propagate(changed)

    def _propagate(self, changed: Set[Site]) -> None:
        rnd = 0
        affected = 0
        while changed:
            table = self._rounds[rnd]
            live = [s for s in changed if s in table]
            candidates: Set[Site] = set(live)
            for s in live:
                candidates.update(table[s].adj)
            affected += len(candidates)

            effect: Set[Site] = set()
            for s in sorted(candidates):
                move = self._decide(s, rnd, table)
                record = self._contracted.get(s)
                if record is None or record[0] < rnd:
                    old = None
                elif record[0] == rnd:
                    old = record[1]
                else:
                    old = STAY
                if move == old and s not in changed:
                    continue
                effect.add(s)
                if move != STAY:
                    if record is not None and record[0] >= rnd:
                        self._retire(record[2])
                        for later in range(rnd + 1, min(record[0], len(self._rounds) - 1) + 1):
                            self._rounds[later].pop(s, None)
                    self._contracted[s] = (rnd, move, self._make_cluster(s, move, table[s], rnd))
                elif record is not None and record[0] == rnd:
                    self._retire(record[2])
                    del self._contracted[s]

            if rnd + 1 == len(self._rounds):
                self._rounds.append({})
            upcoming = self._rounds[rnd + 1]
            recompute = {s for s in candidates if self._stays(s, rnd)}
            for s in effect:
                recompute.update(x for x in table[s].adj if self._stays(x, rnd))
            changed = set()
            for y in recompute:
                state = self._advance(y, rnd, table)
                previous = upcoming.get(y)
                if previous is None or not previous.same_as(state):
                    upcoming[y] = state
                    changed.add(y)
            rnd += 1
        while len(self._rounds) > 1 and not self._rounds[-1]:
            self._rounds.pop()
        self.last_affected = affected
        logger.debug("contraction update re-decided %d site-rounds over %d rounds", affected, rnd)

    def _stays(self, s: Site, rnd: int) -> bool:
        record = self._contracted.get(s)
        return record is None or record[0] > rnd

    def _decide(self, s: Site, rnd: int, table: Dict[Site, SiteRound]) -> Move:
        adj = table[s].adj
        degree = len(adj)
        if degree == 0:
            return FINAL
        if degree == 1:
            (u,) = adj
            if len(table[u].adj) == 1 and u > s:
                return STAY
            return ("rake", u)
        if degree == 2:
            u, w = sorted(adj)
            if len(table[u].adj) == 1 or len(table[w].adj) == 1:
                return STAY
            if not self.coin(s, rnd):
                return STAY
            for x in (u, w):
                if len(table[x].adj) == 2 and self.coin(x, rnd):
                    return STAY
            return ("compress", u, w)
        return STAY

    def _make_cluster(self, s: Site, move: Move, state: SiteRound, rnd: int) -> Cluster:
        parts = [self._leaves[s], *state.raked, *(state.adj[x] for x in sorted(state.adj))]
        if move[0] == "final":
            cluster = Cluster(ClusterKind.NULLARY, (), s, tuple(parts), round=rnd)
            self._roots[s] = cluster
        elif move[0] == "rake":
            cluster = Cluster(ClusterKind.UNARY, (move[1],), s, tuple(parts), round=rnd)
        else:
            _, u, w = move
            cluster = Cluster(ClusterKind.BINARY, (u, w), s, tuple(parts),
                              pathmax=heavier(state.adj[u].pathmax, state.adj[w].pathmax), round=rnd)
        for child in parts:
            child.parent = cluster
        return cluster

    def _retire(self, cluster: Cluster) -> None:
        if cluster.kind is ClusterKind.NULLARY and self._roots.get(cluster.representative) is cluster:
            del self._roots[cluster.representative]

    def _advance(self, y: Site, rnd: int, table: Dict[Site, SiteRound]) -> SiteRound:
        state = table[y]
        adj: Dict[Site, Cluster] = {}
        raked = list(state.raked)
        for x, cluster in state.adj.items():
            record = self._contracted.get(x)
            if record is None or record[0] != rnd:
                adj[x] = cluster
                continue
            move, made = record[1], record[2]
            if move[0] == "rake":
                raked.append(made)
            else:
                other = move[2] if move[1] == y else move[1]
                adj[other] = made
        raked.sort(key=lambda c: c.representative)
        return SiteRound(adj, tuple(raked))

    # --- Invariant walk ---

    def validate(self, deep: bool = True) -> None:
        """
        Check the clustering against the site forest.

        Raises:
            InvariantViolation: listing every problem found.
        """
        problems: List[str] = []
        seen: Set[int] = set()
        reached_sites: Set[Site] = set()
        reached_edges: Set[Tuple[Site, Site]] = set()
        component_of = self._components()

        for root in self.roots():
            if root.kind is not ClusterKind.NULLARY:
                problems.append(f"root {root.representative} is {root.kind.value}")
            if root.parent is not None:
                problems.append(f"root {root.representative} has a parent")
            members: Set[Site] = set()
            stack = [root]
            while stack:
                cluster = stack.pop()
                if id(cluster) in seen:
                    problems.append(f"cluster {cluster.kind.value}@{cluster.representative} reached twice")
                    continue
                seen.add(id(cluster))
                problems.extend(self._check_cluster(cluster, deep))
                if cluster.kind is ClusterKind.VERTEX:
                    reached_sites.add(cluster.site)
                    members.add(cluster.site)
                elif cluster.kind is ClusterKind.EDGE:
                    reached_edges.add(cluster.boundary)
                stack.extend(cluster.children)
            if members and len({component_of[s] for s in members}) != 1:
                problems.append(f"root {root.representative} spans several components")
            if members and len(members) != sum(1 for s in component_of if component_of[s] == component_of[root.representative]):
                problems.append(f"root {root.representative} misses part of its component")

        if reached_sites != set(self._leaves):
            problems.append(f"{len(set(self._leaves) - reached_sites)} vertex leaves unreachable from the roots")
        if reached_edges != set(self._edge_leaves):
            problems.append(f"{len(set(self._edge_leaves) - reached_edges)} edge leaves unreachable from the roots")
        if problems:
            raise InvariantViolation(problems)

    def _check_cluster(self, cluster: Cluster, deep: bool) -> List[str]:
        problems: List[str] = []
        name = f"{cluster.kind.value}@{cluster.representative if cluster.site is None else cluster.site}"
        if len(cluster.boundary) != BOUNDARY_COUNT[cluster.kind]:
            problems.append(f"{name}: {len(cluster.boundary)} boundaries")
        for child in cluster.children:
            if child.parent is not cluster:
                problems.append(f"{name}: child {child.kind.value} has a stale parent link")
        if cluster.kind is ClusterKind.EDGE:
            if self._edge_leaves.get(cluster.boundary) is not cluster:
                problems.append(f"{name}: unknown edge {cluster.boundary}")
            return problems
        if cluster.kind is ClusterKind.VERTEX:
            return problems
        vertex_children = [c for c in cluster.children if c.kind is ClusterKind.VERTEX]
        if len(vertex_children) != 1 or vertex_children[0].site != cluster.representative:
            problems.append(f"{name}: representative is not its single vertex child")
        if cluster.representative in cluster.boundary:
            problems.append(f"{name}: representative on its own boundary")
        union: Set[Site] = set()
        for child in cluster.children:
            union.update(child.boundary)
        allowed = set(cluster.boundary) | {cluster.representative}
        if not set(cluster.boundary) <= union or not union <= allowed:
            problems.append(f"{name}: children boundaries {sorted(union)} vs {sorted(allowed)}")
        if deep and cluster.kind is ClusterKind.BINARY:
            expected = self._path_max_naive(*cluster.boundary)
            if expected != cluster.pathmax:
                problems.append(f"{name}: pathmax {cluster.pathmax} != {expected}")
        return problems

    def _components(self) -> Dict[Site, int]:
        base = self._rounds[0]
        label: Dict[Site, int] = {}
        for start in sorted(base):
            if start in label:
                continue
            label[start] = start
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in base[x].adj:
                    if y not in label:
                        label[y] = start
                        queue.append(y)
        return label

    def _path_max_naive(self, a: Site, b: Site) -> Optional[WeightKey]:
        base = self._rounds[0]
        back: Dict[Site, Optional[Site]] = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y in base[x].adj:
                if y not in back:
                    back[y] = x
                    queue.append(y)
        best: Optional[WeightKey] = None
        x = b
        while back.get(x) is not None:
            prev = back[x]
            best = heavier(best, base[x].adj[prev].pathmax)
            x = prev
        return best
