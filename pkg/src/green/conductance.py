"""
Conductance Network

The random conductance model C_ij = W_ij G(i0, i) G(i0, j) attached to a
Green matrix, and the return-before-absorption diagnostic on wired boxes.
"""

import numpy as np
from scipy import linalg

from src.errors import SingularSystemError
from src.models.weighted_graph import WeightedGraph


def as_green_array(G) -> np.ndarray:
    """Plain array behind a GreenMatrix or array-like."""
    return np.asarray(getattr(G, "matrix", G), dtype=float)


def conductances(graph: WeightedGraph, G, i0: int) -> np.ndarray:
    """
    Edge conductances seen from i0.

    Args:
        graph: Weighted graph
        G: GreenMatrix or (N, N) array
        i0: Starting vertex

    Returns:
        (E,) conductances aligned with graph.edges
    """
    matrix = as_green_array(G)
    row = matrix[i0]
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    return graph.weights * row[i] * row[j]


def conductance_matrix(graph: WeightedGraph, C: np.ndarray) -> np.ndarray:
    """Dense symmetric matrix of edge conductances."""
    C = np.asarray(C, dtype=float)
    if C.shape != (graph.edge_count,):
        raise ValueError(f"Need one conductance per edge ({graph.edge_count})")
    matrix = np.zeros((graph.vertex_count, graph.vertex_count))
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    matrix[i, j] = C
    matrix[j, i] = C
    return matrix


def transition_matrix(graph: WeightedGraph, C: np.ndarray) -> np.ndarray:
    """Row-stochastic jump matrix of the conductance walk."""
    matrix = conductance_matrix(graph, C)
    return matrix / matrix.sum(axis=1, keepdims=True)


def return_probability(graph: WeightedGraph, C: np.ndarray, i0: int) -> float:
    """
    Probability that the conductance walk from i0 comes back to i0 before
    reaching the boundary vertex.

    Solves the Dirichlet problem h = P h off {i0, delta} with h(i0) = 1 and
    h(delta) = 0, then averages h over the first step.

    Args:
        graph: Wired graph
        C: Positive edge conductances
        i0: Starting vertex (not the boundary)

    Returns:
        Return probability in [0, 1]

    Raises:
        ValueError: If the graph is not wired or i0 is the boundary
        SingularSystemError: If the Dirichlet system is singular
    """
    if not graph.is_wired:
        raise ValueError("Return probability needs a wired graph")
    delta = graph.boundary
    if i0 == delta:
        raise ValueError("i0 must differ from the boundary vertex")
    if np.any(np.asarray(C) <= 0):
        raise ValueError("Conductances must be positive")

    P = transition_matrix(graph, C)
    interior = np.array([v for v in range(graph.vertex_count) if v not in (i0, delta)], dtype=np.int64)

    h = np.zeros(graph.vertex_count)
    h[i0] = 1.0
    if len(interior):
        system = np.eye(len(interior)) - P[np.ix_(interior, interior)]
        rhs = P[interior, i0]
        try:
            h[interior] = linalg.solve(system, rhs)
        except linalg.LinAlgError as exc:
            raise SingularSystemError(f"Dirichlet system is singular: {exc}") from exc
        if not np.all(np.isfinite(h)):
            raise SingularSystemError("Dirichlet system has no finite solution")

    # no self-loops, so h[i0] never enters the first-step average
    return float(np.clip(P[i0] @ h, 0.0, 1.0))


def effective_conductance(graph: WeightedGraph, C: np.ndarray, i0: int) -> float:
    """
    Effective conductance between i0 and the boundary vertex.

    Args:
        graph: Wired graph
        C: Positive edge conductances
        i0: Source vertex

    Returns:
        C_eff = c(i0) (1 - return probability)
    """
    total = float(conductance_matrix(graph, C)[i0].sum())
    return total * (1 - return_probability(graph, C, i0))
