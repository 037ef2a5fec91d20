"""
Random Walk Expansion

Truncated path sums G = D^{-1} sum_k (Delta_W D^{-1})^k with D = 2[beta].
"""

from typing import Sequence

import numpy as np

from src.models.weighted_graph import WeightedGraph


def _diagonal(graph: WeightedGraph, beta: Sequence[float]) -> np.ndarray:
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if len(beta) != graph.vertex_count:
        raise ValueError(f"beta has {len(beta)} entries for {graph.vertex_count} vertices")
    diagonal = 2 * beta
    if np.any(diagonal <= 0):
        raise ValueError("Random walk expansion needs 2 beta_i > 0 on every vertex")
    return diagonal


def transfer_radius(graph: WeightedGraph, beta: Sequence[float]) -> float:
    """
    Spectral radius of D^{-1/2} Delta_W D^{-1/2}.

    It is below 1 exactly when H is positive definite, and sets the
    geometric convergence rate of the path sum.

    Args:
        graph: Weighted graph
        beta: Potential with 2 beta_i > 0

    Returns:
        Spectral radius
    """
    diagonal = _diagonal(graph, beta)
    if graph.vertex_count == 1:
        return 0.0
    scale = 1 / np.sqrt(diagonal)
    symmetric = scale[:, None] * graph.weight_matrix * scale[None, :]
    return float(np.max(np.abs(np.linalg.eigvalsh(symmetric))))


def expansion_error_bound(graph: WeightedGraph, beta: Sequence[float], max_len: int) -> float:
    """
    Entrywise bound rho^(L+1) / ((1 - rho) min 2 beta) on the truncation error.

    Args:
        graph: Weighted graph
        beta: Potential with 2 beta_i > 0
        max_len: Longest path length included

    Returns:
        Upper bound on max |truncated - exact| (inf when rho >= 1)
    """
    radius = transfer_radius(graph, beta)
    if radius >= 1:
        return float("inf")
    diagonal = _diagonal(graph, beta)
    return float(radius ** (max_len + 1) / ((1 - radius) * np.min(diagonal)))


def rw_expansion(graph: WeightedGraph, beta: Sequence[float], max_len: int) -> np.ndarray:
    """
    Sum of W_sigma / (2 beta)_sigma over all paths of length at most max_len.

    The sum runs over every source at once by repeated products with the
    transfer matrix T = Delta_W D^{-1}.

    Args:
        graph: Weighted graph
        beta: Potential with 2 beta_i > 0
        max_len: Longest path length included

    Returns:
        (N, N) truncated Green matrix

    Raises:
        ValueError: For a non-positive diagonal, a negative max_len, or a
            potential for which the series diverges
    """
    diagonal = _diagonal(graph, beta)
    if max_len < 0:
        raise ValueError(f"max_len={max_len} must be non-negative")
    radius = transfer_radius(graph, beta)
    if radius >= 1:
        raise ValueError(f"Path sum diverges: spectral radius {radius:.6g} >= 1")

    transfer = graph.weight_matrix / diagonal[None, :]
    term = np.eye(graph.vertex_count)
    total = term.copy()
    for _ in range(max_len):
        term = transfer @ term
        total += term
    return total / diagonal[:, None]
