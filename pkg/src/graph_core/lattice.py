"""
Lattice Boxes

Builders for finite boxes of Z^d, the wired boundary construction and the
theta / weight rescalings of the potential law.
"""

import itertools
import logging
from dataclasses import replace
from typing import Sequence

import numpy as np

from src.models.weighted_graph import BoxSpec, WeightedGraph

logger = logging.getLogger(__name__)


def _check_positive(name: str, value: float) -> None:
    if not value > 0 or not np.isfinite(value):
        raise ValueError(f"{name}={value} must be positive")


def box_edges(spec: BoxSpec) -> np.ndarray:
    """
    Nearest-neighbor edges of the box in row-major vertex numbering.

    Args:
        spec: Box description

    Returns:
        (E, 2) array sorted lexicographically
    """
    width = spec.width
    index = np.arange(spec.site_count).reshape((width,) * spec.dimension)
    pieces = []
    for axis in range(spec.dimension):
        lower = np.take(index, np.arange(width - 1), axis=axis).ravel()
        upper = np.take(index, np.arange(1, width), axis=axis).ravel()
        pieces.append(np.column_stack([lower, upper]))
    edges = np.concatenate(pieces)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return edges[order]


def box_coordinates(spec: BoxSpec) -> np.ndarray:
    """Lattice points of the box, last axis varying fastest."""
    offsets = np.array(
        list(itertools.product(range(-spec.side, spec.side + 1), repeat=spec.dimension)),
        dtype=np.int64,
    )
    return offsets + np.asarray(spec.center, dtype=np.int64)


def build_box(spec: BoxSpec, W: float, theta: float) -> WeightedGraph:
    """
    Build the lattice box with uniform weights.

    A wired spec is honored by wiring the box with theta_delta = theta.

    Args:
        spec: Box description
        W: Edge weight
        theta: Vertex weight

    Returns:
        WeightedGraph with eta = 0
    """
    _check_positive("W", W)
    _check_positive("theta", theta)

    edges = box_edges(spec)
    count = spec.site_count
    graph = WeightedGraph(
        vertex_count=count,
        edges=edges,
        weights=np.full(len(edges), float(W)),
        theta=np.full(count, float(theta)),
        eta=np.zeros(count),
        coordinates=box_coordinates(spec),
        box=replace(spec, wired=False),
        lattice_weight=float(W),
    )
    logger.debug("Built box d=%d n=%d with %d sites", spec.dimension, spec.side, count)
    if spec.wired:
        return wire_box(graph, theta)
    return graph


def cut_counts(graph: WeightedGraph) -> np.ndarray:
    """
    Number of lattice neighbors each box site is missing.

    Args:
        graph: Graph built by build_box

    Returns:
        (M,) integer array over lattice vertices
    """
    if graph.box is None or graph.coordinates is None:
        raise ValueError("Graph has no lattice box geometry")
    offsets = graph.coordinates - np.asarray(graph.box.center)
    side = graph.box.side
    return np.sum(offsets == -side, axis=1) + np.sum(offsets == side, axis=1)


def wire_box(graph: WeightedGraph, theta_delta: float) -> WeightedGraph:
    """
    Add the boundary vertex delta collecting the weight of missing edges.

    Args:
        graph: Unwired graph from build_box
        theta_delta: Vertex weight of delta

    Returns:
        WeightedGraph with delta as the last vertex
    """
    if graph.is_wired:
        raise ValueError("Graph is already wired")
    if graph.box is None or graph.lattice_weight is None:
        raise ValueError("wire_box needs an unwired lattice box from build_box")
    _check_positive("theta_delta", theta_delta)

    counts = cut_counts(graph)
    boundary_sites = np.flatnonzero(counts)
    delta = graph.vertex_count
    new_edges = np.column_stack([boundary_sites, np.full(len(boundary_sites), delta)])

    return WeightedGraph(
        vertex_count=delta + 1,
        edges=np.concatenate([graph.edges, new_edges]),
        weights=np.concatenate([graph.weights, graph.lattice_weight * counts[boundary_sites]]),
        theta=np.append(graph.theta, float(theta_delta)),
        eta=np.append(graph.eta, 0.0),
        boundary=delta,
        coordinates=graph.coordinates,
        box=replace(graph.box, wired=True),
        lattice_weight=graph.lattice_weight,
    )


def exterior_field_box(spec: BoxSpec, W: float, theta: float) -> WeightedGraph:
    """
    Unwired box seeing a surrounding lattice with constant theta as a field.

    eta_i = theta * W * (missing neighbors of i).

    Args:
        spec: Box description (must be unwired)
        W: Edge weight
        theta: Vertex weight inside and outside the box

    Returns:
        WeightedGraph with the exterior field
    """
    if spec.wired:
        raise ValueError("The exterior-field box replaces wiring; pass an unwired spec")
    graph = build_box(spec, W, theta)
    return graph.with_field(theta * W * cut_counts(graph))


def wired_edge_multiplicity(graph: WeightedGraph) -> np.ndarray:
    """
    Number of lattice edges each stored edge stands for.

    Lattice edges count once; the edge from delta to a site counts its
    missing neighbors.

    Args:
        graph: Box built by build_box, wired or not

    Returns:
        (E,) integer array
    """
    multiplicity = np.ones(graph.edge_count, dtype=np.int64)
    if graph.is_wired:
        counts = cut_counts(graph)
        to_delta = graph.edges[:, 1] == graph.boundary
        multiplicity[to_delta] = counts[graph.edges[to_delta, 0]]
    return multiplicity


def _edge_theta_product(graph: WeightedGraph) -> np.ndarray:
    return graph.theta[graph.edges[:, 0]] * graph.theta[graph.edges[:, 1]]


def _rescaled_lattice_weight(weight, theta: np.ndarray, op):
    # only meaningful while theta is uniform
    if weight is None or np.any(theta != theta[0]):
        return None
    return float(op(weight, theta[0] * theta[0]))


def _reject_field(graph: WeightedGraph) -> None:
    if np.any(graph.eta != 0):
        raise ValueError("Rescaling is only defined for eta = 0")


def scale_to_unit_theta(graph: WeightedGraph) -> WeightedGraph:
    """
    W'_ij = W_ij theta_i theta_j and theta' = 1.

    theta^2 beta under the original law has the law of the rescaled graph.

    Args:
        graph: Graph with eta = 0

    Returns:
        Rescaled graph on the same vertices
    """
    _reject_field(graph)
    return graph._replace(
        weights=graph.weights * _edge_theta_product(graph),
        theta=np.ones(graph.vertex_count),
        lattice_weight=_rescaled_lattice_weight(graph.lattice_weight, graph.theta, np.multiply),
    )


def restore_theta(scaled: WeightedGraph, theta: Sequence[float]) -> WeightedGraph:
    """
    Inverse of scale_to_unit_theta.

    Args:
        scaled: Graph with theta = 1
        theta: Original per-vertex theta

    Returns:
        Graph with weights divided by theta_i theta_j and theta restored
    """
    theta_arr = np.broadcast_to(np.asarray(theta, dtype=float), (scaled.vertex_count,)).copy()
    if np.any(scaled.theta != 1):
        raise ValueError("restore_theta expects a graph with unit theta")
    products = theta_arr[scaled.edges[:, 0]] * theta_arr[scaled.edges[:, 1]]
    return scaled._replace(
        weights=scaled.weights / products,
        theta=theta_arr,
        lattice_weight=_rescaled_lattice_weight(scaled.lattice_weight, theta_arr, np.divide),
    )


def scale_to_unit_weight(graph: WeightedGraph) -> WeightedGraph:
    """
    For constant W, W' = 1 and theta' = theta * sqrt(W).

    beta / W under the original law has the law of the rescaled graph.

    Args:
        graph: Graph with a single edge weight and eta = 0

    Returns:
        Rescaled graph on the same vertices
    """
    _reject_field(graph)
    if graph.edge_count == 0 or np.any(graph.weights != graph.weights[0]):
        raise ValueError("Unit-weight rescaling needs a constant edge weight")
    w = float(graph.weights[0])
    return graph._replace(
        weights=np.ones(graph.edge_count),
        theta=graph.theta * np.sqrt(w),
        lattice_weight=None,
    )
