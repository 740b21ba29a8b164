"""
Bounded-degree representation of a forest.

Each original vertex v owns a chain of sites. The primary site (whose id
is v itself) carries up to two real edges; every further site in the
chain carries one. Consecutive sites of a chain are joined by DUMMY
edges, so no site ever has degree above three and contracting the DUMMY
edges gives back the original forest.
"""

from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from windowmsf.edges import EdgeId, VertexId, WeightKey
from windowmsf.errors import ForestError

Site = int


class SiteEdge(NamedTuple):
    a: Site
    b: Site
    key: Optional[WeightKey]  # None marks a DUMMY edge


class ForestEdge(NamedTuple):
    u: VertexId
    v: VertexId
    key: WeightKey


class BoundedForest:
    """Site-level view of a forest over n original vertices."""

    PRIMARY_SLOTS = 2
    DUMMY_SLOTS = 1

    def __init__(self, n: int):
        self.n = n
        self._owner: List[VertexId] = list(range(n))
        self._chain: List[List[Site]] = [[v] for v in range(n)]
        self._load: List[int] = [0] * n
        self._spare: List[List[Site]] = [[v] for v in range(n)]
        self._listed: List[bool] = [True] * n
        self._sites_of_edge: Dict[EdgeId, Tuple[Site, Site]] = {}
        self._edges: Dict[EdgeId, ForestEdge] = {}

    # --- Queries ---

    @property
    def num_sites(self) -> int:
        return len(self._owner)

    def owner(self, site: Site) -> VertexId:
        return self._owner[site]

    def is_dummy(self, site: Site) -> bool:
        return site >= self.n

    def chain(self, v: VertexId) -> List[Site]:
        return list(self._chain[v])

    def slots(self, site: Site) -> int:
        return self.PRIMARY_SLOTS if site < self.n else self.DUMMY_SLOTS

    def __contains__(self, edge: EdgeId) -> bool:
        return edge in self._edges

    def __len__(self) -> int:
        return len(self._edges)

    def edge(self, edge: EdgeId) -> ForestEdge:
        return self._edges[edge]

    def edges(self) -> Dict[EdgeId, ForestEdge]:
        return dict(self._edges)

    def sites_of_edge(self, edge: EdgeId) -> Tuple[Site, Site]:
        return self._sites_of_edge[edge]

    def site_edges(self) -> Iterator[SiteEdge]:
        """Every DUMMY chain edge followed by every real edge, in a fixed order."""
        for chain in self._chain:
            for a, b in zip(chain, chain[1:]):
                yield SiteEdge(a, b, None)
        for edge in sorted(self._edges):
            a, b = self._sites_of_edge[edge]
            yield SiteEdge(a, b, self._edges[edge].key)

    # --- Updates ---

    def link(self, edge: EdgeId, u: VertexId, v: VertexId, key: WeightKey) -> Tuple[List[Site], List[SiteEdge]]:
        """
        Place a real edge on a free slot at each endpoint.

        Returns:
            The sites created for it and the site edges to add, DUMMY chain
            extensions first.
        """
        if edge in self._edges:
            raise ForestError(f"edge {edge} is already in the forest")
        new_sites: List[Site] = []
        links: List[SiteEdge] = []
        ends = []
        for x in (u, v):
            site, extension = self._attach(x)
            if extension is not None:
                new_sites.append(extension.b)
                links.append(extension)
            self._load[site] += 1
            ends.append(site)
        self._sites_of_edge[edge] = (ends[0], ends[1])
        self._edges[edge] = ForestEdge(u, v, key)
        links.append(SiteEdge(ends[0], ends[1], key))
        return new_sites, links

    def cut(self, edge: EdgeId) -> Tuple[Site, Site]:
        """Free the slots of a real edge and return its site pair."""
        if edge not in self._edges:
            raise ForestError(f"absent edge {edge}")
        del self._edges[edge]
        ends = self._sites_of_edge.pop(edge)
        for site in ends:
            self._load[site] -= 1
            if not self._listed[site]:
                self._spare[self._owner[site]].append(site)
                self._listed[site] = True
        return ends

    def _attach(self, v: VertexId) -> Tuple[Site, Optional[SiteEdge]]:
        spare = self._spare[v]
        while spare:
            site = spare[-1]
            if self._load[site] < self.slots(site):
                return site, None
            spare.pop()
            self._listed[site] = False
        site = len(self._owner)
        self._owner.append(v)
        self._load.append(0)
        self._listed.append(True)
        chain = self._chain[v]
        extension = SiteEdge(chain[-1], site, None)
        chain.append(site)
        spare.append(site)
        return site, extension
