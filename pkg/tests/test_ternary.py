from collections import Counter

import pytest

from windowmsf.edges import WeightKey
from windowmsf.errors import ForestError
from windowmsf.ternary import BoundedForest


def site_degrees(forest: BoundedForest) -> Counter:
    degree = Counter()
    for a, b, _key in forest.site_edges():
        degree[a] += 1
        degree[b] += 1
    return degree


def test_high_degree_vertex_grows_a_chain():
    forest = BoundedForest(7)
    for leaf in range(1, 7):
        forest.link(leaf, 0, leaf, WeightKey(leaf, leaf))
    # two edges on the primary site, one on each dummy site
    assert len(forest.chain(0)) == 5
    assert max(site_degrees(forest).values()) <= 3
    assert all(forest.is_dummy(s) for s in forest.chain(0)[1:])


def test_dummy_edges_contract_back_to_the_forest():
    forest = BoundedForest(7)
    for leaf in range(1, 7):
        forest.link(leaf, 0, leaf, WeightKey(leaf, leaf))
    real = set()
    for a, b, key in forest.site_edges():
        if key is None:
            assert forest.owner(a) == forest.owner(b)
        else:
            real.add((forest.owner(a), forest.owner(b), key))
    assert real == {(0, leaf, WeightKey(leaf, leaf)) for leaf in range(1, 7)}


def test_freed_slot_is_reused():
    forest = BoundedForest(5)
    for leaf in range(1, 5):
        forest.link(leaf, 0, leaf, WeightKey(1, leaf))
    sites = forest.num_sites
    forest.cut(2)
    new_sites, links = forest.link(9, 0, 2, WeightKey(1, 9))
    assert new_sites == []
    assert forest.num_sites == sites
    assert len(links) == 1


def test_absent_and_duplicate_edges_raise():
    forest = BoundedForest(3)
    forest.link(0, 0, 1, WeightKey(1, 0))
    with pytest.raises(ForestError):
        forest.link(0, 1, 2, WeightKey(1, 0))
    with pytest.raises(ForestError, match="absent edge"):
        forest.cut(5)
