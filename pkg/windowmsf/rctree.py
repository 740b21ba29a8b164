"""
RC tree over a forest of original vertices.

The forest is ternarized into sites (see ``ternary``) and contracted by
``contraction.Contraction``; this module translates between original
vertices and edges and the site level, and answers the queries.
"""

import logging
from contextlib import contextmanager
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from windowmsf.contraction import Cluster, Contraction, Move, Site
from windowmsf.edges import EdgeId, VertexId, WeightKey, heavier
from windowmsf.errors import ForestError, InvalidVertexError
from windowmsf.ternary import BoundedForest, SiteEdge
from windowmsf.unionfind import DisjointSet

logger = logging.getLogger(__name__)

LinkEdge = Tuple[VertexId, VertexId, WeightKey, EdgeId]


class MarkedView(NamedTuple):
    """The marked vertices and the distinct roots of their components."""

    vertices: Tuple[VertexId, ...]
    roots: Tuple[Cluster, ...]


class RCTree:
    """Batch-dynamic RC tree with path-maximum queries."""

    def __init__(self, n: int, seed: int = 0, edges: Sequence[LinkEdge] = ()):
        self.n = n
        self.seed = seed
        self.forest = BoundedForest(n)
        self._engine = Contraction(seed)
        self._marked: List[Cluster] = []
        new_sites: List[Site] = list(range(n))
        links: List[SiteEdge] = []
        for u, v, key, edge in edges:
            sites, site_links = self.forest.link(edge, u, v, key)
            new_sites.extend(sites)
            links.extend(site_links)
        self._engine.update(new_sites=new_sites, links=links)

    @classmethod
    def build(cls, forest_edges: Iterable[LinkEdge], n: int, seed: int = 0) -> "RCTree":
        """
        Contract a forest from scratch.

        Raises:
            ForestError: if the edges contain a cycle.
        """
        forest_edges = list(forest_edges)
        ds = DisjointSet()
        for u, v, _key, _edge in forest_edges:
            _check_vertex(u, n)
            _check_vertex(v, n)
            if not ds.union(u, v):
                raise ForestError("not a forest")
        return cls(n, seed, forest_edges)

    # --- Updates ---

    def batch_link(self, edges: Iterable[LinkEdge]) -> None:
        """
        Add a batch of edges that keeps the structure a forest.

        Raises:
            ForestError: "cycle" if an edge would close a cycle.
        """
        edges = list(edges)
        if not edges:
            return
        ds = DisjointSet()
        fresh = set()
        for u, v, _key, edge in edges:
            _check_vertex(u, self.n)
            _check_vertex(v, self.n)
            if edge in self.forest or edge in fresh:
                raise ForestError(f"edge {edge} is already in the forest")
            fresh.add(edge)
            if not ds.union(self._root_site(u), self._root_site(v)):
                raise ForestError("cycle")
        new_sites: List[Site] = []
        links: List[SiteEdge] = []
        for u, v, key, edge in edges:
            sites, site_links = self.forest.link(edge, u, v, key)
            new_sites.extend(sites)
            links.extend(site_links)
        self._engine.update(new_sites=new_sites, links=links)
        logger.debug("linked %d edges (%d new sites, %d site-rounds touched)",
                     len(edges), len(new_sites), self._engine.last_affected)

    def batch_cut(self, edges: Iterable[EdgeId]) -> None:
        """
        Remove a batch of forest edges.

        Raises:
            ForestError: "absent edge" if an EdgeId is not in the forest.
        """
        edges = list(edges)
        if not edges:
            return
        if len(set(edges)) != len(edges):
            raise ForestError("absent edge: a batch names the same edge twice")
        for edge in edges:
            if edge not in self.forest:
                raise ForestError(f"absent edge {edge}")
        cuts = [self.forest.cut(edge) for edge in edges]
        self._engine.update(cuts=cuts)
        logger.debug("cut %d edges (%d site-rounds touched)", len(edges), self._engine.last_affected)

    # --- Queries ---

    def connected(self, u: VertexId, v: VertexId) -> bool:
        _check_vertex(u, self.n)
        _check_vertex(v, self.n)
        return self._engine.root_of(u) is self._engine.root_of(v)

    def path_max(self, u: VertexId, v: VertexId) -> Optional[WeightKey]:
        """
        Heaviest key on the u-v path.

        Returns:
            None when u == v or the two vertices are in different trees.
        """
        _check_vertex(u, self.n)
        _check_vertex(v, self.n)
        if u == v:
            return None
        up_u = self._reach_chain(u)
        index = {id(cluster): i for i, (cluster, _reach) in enumerate(up_u)}
        for cluster, reach_v in self._reach_chain(v):
            i = index.get(id(cluster))
            if i is not None:
                rep = cluster.representative
                return heavier(up_u[i][1][rep], reach_v[rep])
        return None

    def _reach_chain(self, site: Site) -> List[Tuple[Cluster, Dict[Site, Optional[WeightKey]]]]:
        """
        For every ancestor of a site's leaf, the heaviest key from the site
        to each of the ancestor's boundaries and to its representative.
        """
        child = self._engine.leaf(site)
        reach: Dict[Site, Optional[WeightKey]] = {site: None}
        chain = []
        cluster = child.parent
        while cluster is not None:
            rep = cluster.representative
            to_rep = reach[rep]
            step = {rep: to_rep}
            for b in cluster.boundary:
                if b in child.boundary:
                    step[b] = reach[b]
                else:
                    sibling = next(c for c in cluster.children
                                   if c is not child and rep in c.boundary and b in c.boundary)
                    step[b] = heavier(to_rep, sibling.pathmax)
            chain.append((cluster, step))
            child, reach = cluster, step
            cluster = cluster.parent
        return chain

    def _root_site(self, v: VertexId) -> Site:
        return self._engine.root_of(v).representative

    def num_components(self) -> int:
        return len(self._engine.roots())

    def roots(self) -> List[Cluster]:
        return self._engine.roots()

    def root(self, v: VertexId) -> Cluster:
        _check_vertex(v, self.n)
        return self._engine.root_of(v)

    def clusters(self) -> Iterator[Cluster]:
        return self._engine.clusters()

    def leaf(self, site: Site) -> Cluster:
        return self._engine.leaf(site)

    def owner(self, site: Site) -> VertexId:
        return self.forest.owner(site)

    def height(self) -> int:
        return self._engine.height()

    def signature(self) -> Tuple[Tuple[Site, int, Move], ...]:
        return self._engine.signature()

    @property
    def last_affected(self) -> int:
        return self._engine.last_affected

    def validate(self, deep: bool = True) -> None:
        """
        Run the invariant walk.

        Raises:
            InvariantViolation: on any broken cluster invariant.
        """
        self._engine.validate(deep)

    def rebuilt(self) -> "RCTree":
        """
        A from-scratch contraction of the current site forest with the same seed.

        The copy shares the site forest and is meant for comparison only.
        """
        fresh = object.__new__(RCTree)
        fresh.n = self.n
        fresh.seed = self.seed
        fresh.forest = self.forest
        fresh._marked = []
        fresh._engine = Contraction(self.seed)
        fresh._engine.update(new_sites=range(self.forest.num_sites), links=list(self.forest.site_edges()))
        return fresh

    # --- Marking ---

    def mark(self, vertices: Iterable[VertexId]) -> MarkedView:
        """Flag every cluster that contains one of the vertices."""
        vertices = tuple(sorted(set(vertices)))
        roots: List[Cluster] = []
        for v in vertices:
            _check_vertex(v, self.n)
            cluster: Optional[Cluster] = self._engine.leaf(v)
            while cluster is not None and not cluster.marked:
                cluster.marked = True
                self._marked.append(cluster)
                if cluster.parent is None:
                    roots.append(cluster)
                cluster = cluster.parent
        return MarkedView(vertices, tuple(roots))

    def unmark(self) -> None:
        for cluster in self._marked:
            cluster.marked = False
        self._marked.clear()

    @contextmanager
    def marked(self, vertices: Iterable[VertexId]) -> Iterator[MarkedView]:
        view = self.mark(vertices)
        try:
            yield view
        finally:
            self.unmark()


def _check_vertex(v: VertexId, n: int) -> None:
    if v < 0 or v >= n:
        raise InvalidVertexError(None, v, n)
