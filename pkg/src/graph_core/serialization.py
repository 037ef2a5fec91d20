"""
Graph Serialization

YAML description of graphs. Boxes that build_box reproduces exactly are
written in the short form (dimension, side, W, theta, wired); anything
else is written as an explicit edge list. Floats are written with repr
precision, so reading a document back gives the same graph bit for bit.
"""

from pathlib import Path
from typing import Any, Dict

import numpy as np
import yaml

from src.graph_core.lattice import build_box
from src.models.weighted_graph import BoxSpec, WeightedGraph


def _box_form(graph: WeightedGraph) -> Dict[str, Any]:
    if graph.box is None or graph.lattice_weight is None:
        return {}
    theta = float(graph.theta[0])
    spec = graph.box
    try:
        rebuilt = build_box(spec, graph.lattice_weight, theta)
    except ValueError:
        return {}
    if rebuilt != graph:
        return {}
    return {
        "dimension": spec.dimension,
        "side": spec.side,
        "center": list(spec.center),
        "W": graph.lattice_weight,
        "theta": theta,
        "wired": spec.wired,
    }


def graph_to_dict(graph: WeightedGraph) -> Dict[str, Any]:
    """
    Structured description of a graph.

    Args:
        graph: Graph to describe

    Returns:
        Dictionary of plain Python values
    """
    short = _box_form(graph)
    if short:
        return {"box": short}

    data: Dict[str, Any] = {
        "vertex_count": graph.vertex_count,
        "edges": [
            [int(i), int(j), float(w)] for (i, j), w in zip(graph.edges, graph.weights)
        ],
        "theta": graph.theta.tolist(),
        "eta": graph.eta.tolist(),
        "boundary": graph.boundary,
    }
    if graph.coordinates is not None:
        data["coordinates"] = graph.coordinates.tolist()
    if graph.box is not None:
        data["box_spec"] = graph.box.to_dict()
    if graph.lattice_weight is not None:
        data["lattice_weight"] = graph.lattice_weight
    return data


def graph_from_dict(data: Dict[str, Any]) -> WeightedGraph:
    """
    Rebuild a graph from graph_to_dict output.

    Args:
        data: Description

    Returns:
        WeightedGraph
    """
    if "box" in data:
        box = data["box"]
        spec = BoxSpec(
            dimension=int(box["dimension"]),
            side=int(box["side"]),
            center=tuple(box.get("center") or ()),
            wired=bool(box.get("wired", False)),
        )
        return build_box(spec, float(box["W"]), float(box["theta"]))

    edges = data.get("edges") or []
    box_spec = data.get("box_spec")
    return WeightedGraph(
        vertex_count=int(data["vertex_count"]),
        edges=np.array([[e[0], e[1]] for e in edges], dtype=np.int64).reshape(-1, 2),
        weights=np.array([e[2] for e in edges], dtype=float),
        theta=np.array(data["theta"], dtype=float),
        eta=np.array(data.get("eta") or [0.0] * int(data["vertex_count"]), dtype=float),
        boundary=data.get("boundary"),
        coordinates=None if data.get("coordinates") is None else np.array(data["coordinates"]),
        box=None if box_spec is None else BoxSpec(
            dimension=int(box_spec["dimension"]),
            side=int(box_spec["side"]),
            center=tuple(box_spec.get("center") or ()),
            wired=bool(box_spec.get("wired", False)),
        ),
        lattice_weight=data.get("lattice_weight"),
    )


def graph_to_yaml(graph: WeightedGraph) -> str:
    """Serialize a graph to a YAML document."""
    return yaml.safe_dump(graph_to_dict(graph), sort_keys=False, default_flow_style=None)


def graph_from_yaml(text: str) -> WeightedGraph:
    """Parse a YAML document written by graph_to_yaml."""
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ValueError("Graph document must be a mapping")
    return graph_from_dict(data)


def save_graph(graph: WeightedGraph, filepath: Path) -> None:
    """
    Save a graph description to a file.

    Args:
        graph: Graph to save
        filepath: Destination path
    """
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(graph_to_yaml(graph))


def load_graph(filepath: Path) -> WeightedGraph:
    """
    Load a graph description from a file.

    Args:
        filepath: Source path

    Returns:
        WeightedGraph
    """
    with open(filepath, "r", encoding="utf-8") as f:
        return graph_from_yaml(f.read())
