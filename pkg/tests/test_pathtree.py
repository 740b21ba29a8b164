import itertools
import random

import networkx as nx
import pytest

from helpers import keyed, random_forest_edges, random_tree_edges
from windowmsf import oracle
from windowmsf.contraction import Cluster, ClusterKind
from windowmsf.edges import WeightKey
from windowmsf.pathtree import WorkingGraph, compressed_path_trees, expand_cluster, prune, splice_out
from windowmsf.rctree import RCTree

K3, K9, K2, K5 = WeightKey(3, 0), WeightKey(9, 1), WeightKey(2, 2), WeightKey(5, 3)


def line_graph(marked=frozenset()) -> WorkingGraph:
    g = WorkingGraph(marked)
    g.add_edge(0, 1, K3)
    g.add_edge(1, 2, K9)
    return g


def five_path() -> RCTree:
    # a-b(3)-c(9)-d(2)-e(5)
    return RCTree.build([(0, 1, K3, 0), (1, 2, K9, 1), (2, 3, K2, 2), (3, 4, K5, 3)], 5, seed=2)


def edge_set(cpt):
    return {(min(a, b), max(a, b), key) for a, b, key in cpt.edges}


# --- splice_out / prune ---

def test_splice_out_keeps_the_heavier_key():
    g = splice_out(line_graph({0, 2}), 1)
    assert g.adj == {0: {2: K9}, 2: {0: K9}}


def test_splice_out_leaves_marked_vertex():
    g = splice_out(line_graph({0, 1, 2}), 1)
    assert set(g.adj) == {0, 1, 2}


def test_splice_out_leaves_degree_three_vertex():
    g = line_graph()
    g.add_edge(1, 3, K2)
    splice_out(g, 1)
    assert g.degree(1) == 3


def test_prune_removes_unmarked_leaf_and_splices_neighbour():
    g = WorkingGraph({0, 2})
    g.add_edge(0, 1, K3)
    g.add_edge(1, 2, K9)
    g.add_edge(1, 3, K5)
    prune(g, 3)
    assert g.adj == {0: {2: K9}, 2: {0: K9}}


def test_prune_keeps_marked_leaf():
    g = WorkingGraph({0})
    g.add_edge(0, 1, K3)
    prune(g, 0)
    assert g.degree(0) == 1


def test_prune_splices_degree_two():
    g = prune(line_graph({0, 2}), 1)
    assert 1 not in g


# --- expand_cluster ---

def test_unmarked_binary_cluster_is_one_edge():
    c = Cluster(ClusterKind.BINARY, (0, 2), 1, pathmax=WeightKey(7, 4))
    g = expand_cluster(c, frozenset())
    assert g.adj == {0: {2: WeightKey(7, 4)}, 2: {0: WeightKey(7, 4)}}


def test_unmarked_unary_cluster_is_its_boundary():
    c = Cluster(ClusterKind.UNARY, (3,), 1)
    assert expand_cluster(c, frozenset()).adj == {3: {}}


def test_marked_vertex_leaf_is_itself():
    c = Cluster(ClusterKind.VERTEX, site=4, marked=True)
    assert expand_cluster(c, frozenset({4})).adj == {4: {}}


# --- compressed_path_trees ---

def test_two_ends_of_a_path():
    cpt = compressed_path_trees(five_path(), {0, 4})
    assert cpt.vertices == {0, 4}
    assert edge_set(cpt) == {(0, 4, K9)}


def test_ends_and_middle_of_a_path():
    cpt = compressed_path_trees(five_path(), {0, 2, 4})
    assert edge_set(cpt) == {(0, 2, K9), (2, 4, K5)}


def test_star_centre_survives_as_steiner_vertex():
    tree = RCTree.build([(1, 0, WeightKey(1, 0), 0), (2, 0, WeightKey(2, 1), 1), (3, 0, WeightKey(3, 2), 2)], 4)
    cpt = compressed_path_trees(tree, {1, 2, 3})
    assert cpt.vertices == {0, 1, 2, 3}
    assert edge_set(cpt) == {(0, 1, WeightKey(1, 0)), (0, 2, WeightKey(2, 1)), (0, 3, WeightKey(3, 2))}


def test_single_marked_vertex():
    cpt = compressed_path_trees(five_path(), {3})
    assert cpt.vertices == {3}
    assert cpt.edges == []


def test_marks_are_cleared_afterwards():
    tree = five_path()
    compressed_path_trees(tree, {0, 3})
    assert not any(c.marked for c in tree.clusters())


def check_cpt(tree: RCTree, edges, n: int, marked) -> None:
    cpt = compressed_path_trees(tree, marked)
    assert set(marked) <= cpt.vertices
    assert len(cpt.vertices) <= 2 * len(marked)

    g = nx.Graph()
    g.add_nodes_from(cpt.vertices)
    g.add_edges_from((a, b) for a, b, _key in cpt.edges)
    assert g.number_of_edges() == len(cpt.edges)
    assert nx.is_forest(g)
    for v in cpt.vertices - set(marked):
        assert g.degree(v) >= 3

    cpt_edges = [(a, b, key) for a, b, key in cpt.edges]
    for u, v in itertools.combinations(sorted(marked), 2):
        expected = oracle.path_max_naive(keyed(edges), u, v)
        assert oracle.path_max_naive(cpt_edges, u, v) == expected
        assert (expected is not None) == tree.connected(u, v)


@pytest.mark.parametrize("seed", range(40))
def test_cpt_fidelity_on_random_forests(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 100)
    edges = random_forest_edges(rng, n, keep=0.9, hubs=rng.choice([0, 0, 3]))
    tree = RCTree.build(edges, n, seed=seed)
    marked = rng.sample(range(n), rng.randint(1, min(10, n)))
    check_cpt(tree, edges, n, marked)


@pytest.mark.slow
def test_cpt_fidelity_thousand_trials():
    rng = random.Random(99)
    for seed in range(1000):
        n = rng.randint(2, 100)
        edges = random_tree_edges(rng, n, hubs=rng.choice([0, 0, 3]))
        tree = RCTree.build(edges, n, seed=seed)
        check_cpt(tree, edges, n, rng.sample(range(n), rng.randint(1, min(10, n))))


def test_extraction_only_enters_marked_clusters_and_their_children():
    rng = random.Random(5)
    n = 200
    tree = RCTree.build(random_tree_edges(rng, n), n, seed=5)
    marked = {3, 40, 77}
    ancestors = {}
    for v in marked:
        c = tree.leaf(v)
        while c is not None:
            ancestors[id(c)] = c
            c = c.parent
    bound = len(ancestors) + sum(len(c.children) for c in ancestors.values())
    cpt = compressed_path_trees(tree, marked)
    assert cpt.visited <= bound
    assert cpt.visited < sum(1 for _ in tree.clusters())
