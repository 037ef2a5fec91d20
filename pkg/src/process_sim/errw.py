"""
Edge-Reinforced Random Walk

Discrete walk that crosses an incident edge with probability proportional
to its current weight and adds 1 to the weight of every edge it crosses.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.models.weighted_graph import WeightedGraph
from src.process_sim.vrjp import choose_target
from src.utils.replicas import as_generator

logger = logging.getLogger(__name__)


def _incidence(graph: WeightedGraph) -> List[np.ndarray]:
    """Edge indices incident to each vertex."""
    lists: List[List[int]] = [[] for _ in range(graph.vertex_count)]
    for e, (i, j) in enumerate(graph.edges):
        lists[int(i)].append(e)
        lists[int(j)].append(e)
    return [np.asarray(edges, dtype=int) for edges in lists]


def simulate_errw(
    graph: WeightedGraph,
    i0: int,
    steps: int,
    rng: Union[int, np.random.Generator],
    a: Optional[Sequence[float]] = None,
) -> Tuple[int, ...]:
    """
    Run ERRW for ``steps`` steps.

    Args:
        graph: Graph whose edges carry the initial weights
        i0: Starting vertex
        steps: Number of steps
        rng: Generator or seed
        a: Initial per-edge weights aligned with graph.edges (default: graph.weights)

    Returns:
        Visited vertices, steps + 1 entries
    """
    if not 0 <= i0 < graph.vertex_count:
        raise ValueError(f"Start vertex {i0} outside the graph")
    if steps < 0:
        raise ValueError(f"Step count {steps} must be non-negative")
    rng = as_generator(rng)
    weights = np.array(graph.weights if a is None else a, dtype=float)
    if weights.shape != (graph.edge_count,):
        raise ValueError(f"Expected {graph.edge_count} initial weights, got {weights.shape}")
    if np.any(weights <= 0):
        raise ValueError("Initial edge weights must be positive")

    incident = _incidence(graph)
    edges = graph.edges
    current = i0
    path = [i0]
    for _ in range(steps):
        options = incident[current]
        if len(options) == 0:
            raise ValueError(f"Vertex {current} has no incident edge")
        e = choose_target(options, weights[options], rng)
        i, j = edges[e]
        current = int(j) if int(i) == current else int(i)
        weights[e] += 1.0
        path.append(current)
    return tuple(path)


def sample_gamma_weights(a: Sequence[float], rng: Union[int, np.random.Generator]) -> np.ndarray:
    """
    Independent Gamma(a_e, 1) weight per edge.

    Args:
        a: Positive shapes
        rng: Generator or seed

    Returns:
        Array shaped like ``a``
    """
    shapes = np.asarray(a, dtype=float)
    if np.any(shapes <= 0):
        raise ValueError("Gamma shapes must be positive")
    return as_generator(rng).gamma(shapes, 1.0)
