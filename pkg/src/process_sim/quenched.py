"""
Quenched Jump Process

Time-homogeneous Markov jump process in a fixed environment: from i it
jumps to j at rate W_ij G(i0, j) / (2 G(i0, i)).
"""

import logging
from typing import Union

import numpy as np

from src.green.conductance import as_green_array
from src.models.trajectory import Trajectory
from src.models.weighted_graph import WeightedGraph
from src.process_sim.vrjp import choose_target, exponential_holding
from src.utils.replicas import as_generator

logger = logging.getLogger(__name__)


def jump_rates(graph: WeightedGraph, G, i0: int) -> np.ndarray:
    """
    Rate matrix R_ij = W_ij G(i0, j) / (2 G(i0, i)).

    Args:
        graph: Weighted graph
        G: GreenMatrix or array
        i0: Starting vertex of the environment

    Returns:
        (N, N) array with zero diagonal
    """
    row = as_green_array(G)[i0]
    if np.any(row <= 0):
        raise ValueError("G(i0, .) must be positive")
    return 0.5 * graph.weight_matrix * row[None, :] / row[:, None]


def sojourn_rates(graph: WeightedGraph, G, i0: int) -> np.ndarray:
    """
    Total jump rate at each vertex.

    Equals beta_i away from i0 and beta_i0 - 1 / (2 G(i0, i0)) at i0.
    """
    return jump_rates(graph, G, i0).sum(axis=1)


def simulate_quenched_jump(
    graph: WeightedGraph,
    G,
    i0: int,
    jumps: int,
    rng: Union[int, np.random.Generator],
) -> Trajectory:
    """
    Simulate ``jumps`` jumps of the quenched process started at i0.

    Args:
        graph: Weighted graph
        G: GreenMatrix or array of the environment
        i0: Starting vertex
        jumps: Number of jumps, at least 1
        rng: Generator or seed

    Returns:
        Trajectory whose horizon is the last jump time
    """
    if not 0 <= i0 < graph.vertex_count:
        raise ValueError(f"Start vertex {i0} outside the graph")
    if jumps < 1:
        raise ValueError(f"Jump count {jumps} must be at least 1")
    rng = as_generator(rng)
    rates = jump_rates(graph, G, i0)

    t = 0.0
    current = i0
    states = [i0]
    epochs = [0.0]
    for _ in range(jumps):
        neighbors = graph.neighbors(current)
        if len(neighbors) == 0:
            raise ValueError("An isolated vertex cannot make jumps")
        local = rates[current, neighbors]
        t += exponential_holding(float(local.sum()), rng)
        current = choose_target(neighbors, local, rng)
        states.append(current)
        epochs.append(t)
    return Trajectory(tuple(states), tuple(epochs), t)
