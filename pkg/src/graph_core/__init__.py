"""
Graph Core Module

Finite weighted graphs, lattice boxes and the wired boundary construction.
"""

from src.graph_core.lattice import (
    build_box,
    cut_counts,
    exterior_field_box,
    restore_theta,
    scale_to_unit_theta,
    scale_to_unit_weight,
    wire_box,
    wired_edge_multiplicity,
)
from src.graph_core.serialization import graph_from_yaml, graph_to_yaml, load_graph, save_graph

__all__ = [
    "build_box",
    "cut_counts",
    "exterior_field_box",
    "restore_theta",
    "scale_to_unit_theta",
    "scale_to_unit_weight",
    "wire_box",
    "wired_edge_multiplicity",
    "graph_from_yaml",
    "graph_to_yaml",
    "load_graph",
    "save_graph",
]
