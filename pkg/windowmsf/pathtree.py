"""
Compressed path trees.

Given a set of marked vertices, the compressed path tree is the smallest
tree over the marked vertices (plus Steiner vertices of degree three or
more) in which every path carries the same heaviest edge as the matching
path of the forest. It is read off a marked RC tree top-down, recursing
only into clusters that contain a marked vertex.
"""

import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set

from windowmsf.contraction import Cluster, ClusterKind, Site
from windowmsf.edges import EdgeId, VertexId, WeightKey, heavier
from windowmsf.rctree import RCTree

logger = logging.getLogger(__name__)


class CPTEdge(NamedTuple):
    a: VertexId
    b: VertexId
    key: WeightKey

    @property
    def origin(self) -> EdgeId:
        return self.key.edge


@dataclass
class CompressedPathTree:
    """Compressed path tree over original vertices."""

    vertices: Set[VertexId] = field(default_factory=set)
    edges: List[CPTEdge] = field(default_factory=list)
    marked: FrozenSet[VertexId] = frozenset()
    visited: int = 0

    def adjacency(self) -> Dict[VertexId, Dict[VertexId, WeightKey]]:
        adj: Dict[VertexId, Dict[VertexId, WeightKey]] = {v: {} for v in self.vertices}
        for a, b, key in self.edges:
            adj[a][b] = key
            adj[b][a] = key
        return adj


class WorkingGraph:
    """
    Mutable site graph built during extraction.

    Keys are None on paths made only of DUMMY edges.
    """

    def __init__(self, marked: AbstractSet[Site]):
        self.adj: Dict[Site, Dict[Site, Optional[WeightKey]]] = {}
        self.marked = marked
        self.visited = 0

    def add_vertex(self, v: Site) -> None:
        self.adj.setdefault(v, {})

    def add_edge(self, a: Site, b: Site, key: Optional[WeightKey]) -> None:
        self.add_vertex(a)
        self.add_vertex(b)
        self.adj[a][b] = key
        self.adj[b][a] = key

    def degree(self, v: Site) -> int:
        return len(self.adj.get(v, ()))

    def __contains__(self, v: Site) -> bool:
        return v in self.adj


def splice_out(g: WorkingGraph, v: Site, keep: AbstractSet[Site] = frozenset()) -> WorkingGraph:
    """Replace an unmarked degree-2 vertex and its two edges by one edge carrying the heavier key."""
    if v in g.marked or v in keep:
        return g
    nbrs = g.adj.get(v)
    if nbrs is None or len(nbrs) != 2:
        return g
    (a, key_a), (b, key_b) = nbrs.items()
    del g.adj[v]
    del g.adj[a][v]
    del g.adj[b][v]
    g.add_edge(a, b, heavier(key_a, key_b))
    return g


def prune(g: WorkingGraph, v: Site, keep: AbstractSet[Site] = frozenset()) -> WorkingGraph:
    nbrs = g.adj.get(v)
    if nbrs is None:
        return g
    if len(nbrs) == 2:
        return splice_out(g, v, keep)
    if len(nbrs) == 1 and v not in g.marked and v not in keep:
        (u,) = nbrs
        del g.adj[u][v]
        del g.adj[v]
        return splice_out(g, u, keep)
    return g


def expand_cluster(c: Cluster, marked: AbstractSet[Site], g: Optional[WorkingGraph] = None) -> WorkingGraph:
    """
    Compressed path tree of a cluster and its boundary, the boundary
    counted as marked.

    The RC tree must have been marked for the same sites.
    """
    if g is None:
        g = WorkingGraph(marked)
    _expand(c, g)
    return g


def _expand(c: Cluster, g: WorkingGraph) -> None:
    g.visited += 1
    if not c.marked:
        if c.is_binary:
            g.add_edge(c.boundary[0], c.boundary[1], c.pathmax)
        else:
            for b in c.boundary:
                g.add_vertex(b)
        return
    if c.kind is ClusterKind.VERTEX:
        g.add_vertex(c.site)
        return
    for child in c.children:
        _expand(child, g)
    # A marked EDGE leaf cannot occur: marking only climbs from vertex leaves.
    prune(g, c.representative, keep=frozenset(c.boundary))


def compressed_path_trees(t: RCTree, marked: Iterable[VertexId]) -> CompressedPathTree:
    """
    Compressed path tree of a marked vertex set over every component that
    holds one of them, with DUMMY sites folded back into their owners.
    """
    vertices = frozenset(marked)
    if not vertices:
        return CompressedPathTree()
    with t.marked(vertices) as view:
        g = WorkingGraph(vertices)
        for root in view.roots:
            _expand(root, g)
    cpt = _fold_sites(t, g)
    cpt.marked = vertices
    logger.debug("compressed path tree: %d marked, %d vertices, %d edges, %d clusters visited",
                 len(vertices), len(cpt.vertices), len(cpt.edges), g.visited)
    return cpt


def _fold_sites(t: RCTree, g: WorkingGraph) -> CompressedPathTree:
    cpt = CompressedPathTree(visited=g.visited)
    for site, nbrs in g.adj.items():
        a = t.owner(site)
        cpt.vertices.add(a)
        for other, key in nbrs.items():
            if site < other and key is not None:
                cpt.edges.append(CPTEdge(a, t.owner(other), key))
    cpt.edges.sort(key=lambda e: e.key)
    return cpt
