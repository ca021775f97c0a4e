"""Certifying algorithms for claw-free chordal (NC-path-tree) graphs."""

from .graph import Graph, block_cut_tree, connected_components, parse_graph, serialize, twin_partition
from .chordal import chordality, clique_tree, lexbfs_order
from .model import annotate, build_aux_graph, partition_edges
from .recognition import recognize, find_claw_chordal, extract_claw, verify_certificate
from .domination import mcds, mds, mids, steiner_tree, covered_edge_check
from .hamiltonicity import (build_trace, hamiltonian_cycle, hamiltonian_path, min_leaf_spanning_tree,
                            proper_interval_ham_path, proper_interval_two_paths)

__version__ = "0.1.0"

__all__ = [
    "Graph", "parse_graph", "serialize", "connected_components", "block_cut_tree", "twin_partition",
    "lexbfs_order", "chordality", "clique_tree", "annotate", "partition_edges", "build_aux_graph",
    "recognize", "find_claw_chordal", "extract_claw", "verify_certificate",
    "mids", "mds", "mcds", "steiner_tree", "covered_edge_check",
    "build_trace", "hamiltonian_cycle", "hamiltonian_path", "min_leaf_spanning_tree",
    "proper_interval_two_paths", "proper_interval_ham_path",
]
