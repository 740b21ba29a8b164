import pytest

from helpers import stream_edges
from windowmsf import oracle
from windowmsf.edges import StreamEdge, WeightKey
from windowmsf.errors import OracleLimitError
from windowmsf.models import ExpireCommand, InsertCommand
from windowmsf.oracle import WindowSnapshot


def test_snapshot_from_tuples():
    snap = WindowSnapshot.from_log(3, [("insert", [(0, 1, 4), (2, 2, 1), (1, 2, 6)]), ("expire", 1)])
    assert snap.edges == [StreamEdge(1, 2, 6, 2, 1)]
    assert snap.t_w == 1
    assert snap.next_toa == 3


def test_snapshot_from_commands_clamps_expiry():
    snap = WindowSnapshot.from_log(3, [InsertCommand(edges=[(0, 1, 4)]), ExpireCommand(delta=9)])
    assert snap.edges == []
    assert snap.t_w == 1


def test_snapshot_leaves_out_heavy_edges():
    snap = WindowSnapshot.from_log(3, [("insert", [(0, 1, 4), (1, 2, 90)])], max_weight=10)
    assert [e.id for e in snap.edges] == [0]


def test_kruskal_by_weight_and_by_arrival():
    edges = stream_edges([(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert oracle.kruskal_msf(edges, "weight") == {0, 1}
    assert oracle.kruskal_msf(edges, "window") == {1, 2}


def test_forest_decomposition():
    edges = stream_edges([(0, 1, 1)] * 3)
    assert oracle.forest_decomposition(edges, 4) == [{2}, {1}, {0}, set()]


def test_path_max_naive():
    tree = [(0, 1, WeightKey(3, 0)), (1, 2, WeightKey(9, 1)), (2, 3, WeightKey(2, 2))]
    assert oracle.path_max_naive(tree, 0, 3) == WeightKey(9, 1)
    assert oracle.path_max_naive(tree, 2, 3) == WeightKey(2, 2)
    assert oracle.path_max_naive(tree, 0, 5) is None
    assert oracle.path_max_naive(tree, 1, 1) is None


def test_bipartite_and_cycle():
    triangle = stream_edges([(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    assert not oracle.bipartite_naive(3, triangle)
    assert oracle.has_cycle_naive(3, triangle)
    assert not oracle.has_cycle_naive(3, triangle[:2])
    assert oracle.has_cycle_naive(2, stream_edges([(0, 1, 1), (1, 0, 1)]))


def test_cut_enumerate():
    edges = stream_edges([(0, 1, 1), (1, 2, 1), (0, 1, 1)])
    cuts = dict(oracle.cut_enumerate(3, edges))
    assert len(cuts) == 3
    assert cuts[frozenset({0})] == 2
    assert cuts[frozenset({0, 1})] == 1
    assert cuts[frozenset({0, 2})] == 3
    with pytest.raises(OracleLimitError):
        oracle.cut_enumerate(13, [])


def test_maxflow_counts_parallel_edges():
    edges = stream_edges([(0, 1, 1), (0, 1, 1), (1, 2, 1)])
    assert oracle.maxflow_naive(3, edges, 0, 1) == 2
    assert oracle.maxflow_naive(3, edges, 0, 2) == 1


def test_level_components():
    edges = stream_edges([(0, 1, 1), (1, 2, 5)])
    assert oracle.level_components(4, edges, 1) == 3
    assert oracle.level_components(4, edges, 5) == 2


def test_connectivity_helpers():
    edges = stream_edges([(0, 1, 1), (2, 3, 1)])
    assert oracle.components_naive(5, edges) == 3
    assert oracle.connected_naive(5, edges, 1, 0)
    assert not oracle.connected_naive(5, edges, 1, 2)
    pairs = oracle.pairwise_connectivity(4, edges)
    assert pairs[(0, 1)] and pairs[(2, 3)]
    assert not pairs[(0, 3)]
    assert len(pairs) == 6
