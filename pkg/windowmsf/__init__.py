"""
windowmsf: batch-incremental minimum spanning forests on rake-compress
trees, and the sliding-window graph structures built on them.
"""

from windowmsf.edges import EdgeClock, StreamEdge, WeightKey, make_window_key, normalize_batch, weight_key
from windowmsf.msf import BatchResult, MSForest, msf_small
from windowmsf.pathtree import CompressedPathTree, compressed_path_trees
from windowmsf.rctree import RCTree
from windowmsf.window import (
    ApproximateMSFWeight,
    BipartitenessMonitor,
    CutSparsifier,
    CycleMonitor,
    EagerConnectivity,
    KCertificate,
    SlidingConnectivity,
)

__all__ = [
    "ApproximateMSFWeight",
    "BatchResult",
    "BipartitenessMonitor",
    "CompressedPathTree",
    "CutSparsifier",
    "CycleMonitor",
    "EagerConnectivity",
    "EdgeClock",
    "KCertificate",
    "MSForest",
    "RCTree",
    "SlidingConnectivity",
    "StreamEdge",
    "WeightKey",
    "compressed_path_trees",
    "make_window_key",
    "msf_small",
    "normalize_batch",
    "weight_key",
]
