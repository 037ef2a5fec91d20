"""
Trajectory Densities

Exact densities of a finite trajectory under the time-changed VRJP (f^Z),
under the quenched jump process in a fixed potential, and under its
average over the potential (annealed).

Local times S_i are the occupation times of the trajectory on its own
clock. All three densities are with respect to the same reference measure
on paths (counting on the jump sequence, Lebesgue on the jump times).
"""

import logging
from typing import Sequence

import numpy as np

from src.green.operator import assemble_H, green
from src.models.trajectory import Trajectory
from src.models.weighted_graph import WeightedGraph
from src.potential.ward import edge_interaction, xi_closed_form

logger = logging.getLogger(__name__)


def edge_energy(graph: WeightedGraph, S: Sequence[float]) -> float:
    """
    sum over edges of W_ij (sqrt((S_i + theta_i^2)(S_j + theta_j^2)) - theta_i theta_j).

    Args:
        graph: Weighted graph
        S: Per-vertex local times

    Returns:
        Non-negative energy, 0 at S = 0
    """
    S = np.asarray(S, dtype=float)
    return edge_interaction(graph, graph.theta * graph.theta + S)


def _admissible(graph: WeightedGraph, traj: Trajectory) -> None:
    traj.check_adjacent(graph.weight_matrix)


def _log_jump_weights(graph: WeightedGraph, traj: Trajectory) -> float:
    W = graph.weight_matrix
    return float(sum(np.log(0.5 * W[a, b]) for a, b in zip(traj.states, traj.states[1:])))


def sojourn_exponents(graph: WeightedGraph, traj: Trajectory) -> np.ndarray:
    """
    Integrated total jump rate of Z over every sojourn.

    A sojourn at i taking S_i from a to b contributes
    sum_j W_ij sqrt(S_j + theta_j^2) (b - a) / (sqrt(b + theta_i^2) + sqrt(a + theta_i^2)).

    Args:
        graph: Weighted graph
        traj: Trajectory on the time-changed clock

    Returns:
        One exponent per sojourn
    """
    _admissible(graph, traj)
    W = graph.weight_matrix
    theta2 = graph.theta * graph.theta
    S = np.zeros(graph.vertex_count)
    out = np.empty(len(traj.states))
    for k, (state, length) in enumerate(zip(traj.states, traj.durations())):
        start = S[state]
        end = start + length
        roots = np.sqrt(S + theta2)
        pull = float(W[state] @ roots)
        out[k] = pull * length / (np.sqrt(end + theta2[state]) + np.sqrt(start + theta2[state]))
        S[state] = end
    return out


def log_density_fZ(graph: WeightedGraph, traj: Trajectory) -> float:
    """
    log f^Z: jump rates W_ij sqrt(S_j + theta_j^2) / (2 sqrt(S_i + theta_i^2))
    at each jump, times exp(-integrated total rate).
    """
    _admissible(graph, traj)
    theta2 = graph.theta * graph.theta
    S = np.zeros(graph.vertex_count)
    log_ratio = 0.0
    for k, (state, length) in enumerate(zip(traj.states, traj.durations())):
        S[state] += length
        if k + 1 < len(traj.states):
            target = traj.states[k + 1]
            log_ratio += 0.5 * (np.log(S[target] + theta2[target]) - np.log(S[state] + theta2[state]))
    return _log_jump_weights(graph, traj) + log_ratio - float(np.sum(sojourn_exponents(graph, traj)))


def density_fZ(graph: WeightedGraph, traj: Trajectory) -> float:
    """Trajectory density of the time-changed VRJP."""
    return float(np.exp(log_density_fZ(graph, traj)))


def density_fX_annealed(graph: WeightedGraph, traj: Trajectory) -> float:
    """
    Quenched density averaged over the potential.

    prod (W/2) * prod_{i != i0} theta_i / prod_{i != i_n} sqrt(S_i + theta_i^2)
    * exp(-edge_energy(S)).

    Args:
        graph: Weighted graph
        traj: Trajectory

    Returns:
        Positive density
    """
    _admissible(graph, traj)
    S = traj.occupation(graph.vertex_count)
    closed = xi_closed_form(graph, S, traj.start, traj.end)
    return float(np.exp(_log_jump_weights(graph, traj)) * closed)


def density_fX_quenched(graph: WeightedGraph, beta: Sequence[float], traj: Trajectory) -> float:
    """
    Density of the quenched jump process in the potential ``beta``.

    prod (W/2) * G(i0, i_n) / G(i0, i0) * exp(-sum_i S_i beta_i + S_i0 / (2 G(i0, i0))).

    Args:
        graph: Weighted graph
        beta: Potential with H > 0
        traj: Trajectory

    Returns:
        Positive density

    Raises:
        NotPositiveDefiniteError: If H_beta is not positive definite
    """
    _admissible(graph, traj)
    G = green(assemble_H(graph, beta))
    i0, end = traj.start, traj.end
    g00 = G[i0, i0]
    S = traj.occupation(graph.vertex_count)
    exponent = -float(S @ np.asarray(beta, dtype=float)) + S[i0] / (2 * g00)
    return float(np.exp(_log_jump_weights(graph, traj) + exponent) * G[i0, end] / g00)
