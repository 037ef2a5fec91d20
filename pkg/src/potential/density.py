"""
Potential Density

Evaluation of the multivariate inverse-Gaussian density of beta and of its
one-site marginals.
"""

from typing import Sequence

import numpy as np
from scipy import linalg

from src.errors import NotPositiveDefiniteError
from src.green.operator import assemble_H, cholesky_factor
from src.models.potential_sample import GigParams
from src.models.weighted_graph import WeightedGraph


def log_density_nu(graph: WeightedGraph, beta: Sequence[float]) -> float:
    """
    Log-density of beta, -inf off the support {H_beta > 0}.

    Args:
        graph: Weighted graph
        beta: One value per vertex

    Returns:
        Log-density
    """
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if not np.all(np.isfinite(beta)):
        raise ValueError("beta must be finite")
    H = assemble_H(graph, beta)
    try:
        factor = cholesky_factor(H)
    except NotPositiveDefiniteError:
        return float("-inf")

    theta, eta = graph.theta, graph.eta
    quadratic = float(theta @ H.matrix @ theta)
    field = 0.0
    if np.any(eta):
        field = float(eta @ linalg.cho_solve((factor, True), eta))
    log_det = 2 * float(np.sum(np.log(np.diag(factor))))
    n = graph.vertex_count
    return (
        0.5 * n * np.log(2 / np.pi)
        + float(np.sum(np.log(theta)))
        - 0.5 * (quadratic + field - 2 * float(theta @ eta))
        - 0.5 * log_det
    )


def density_nu(graph: WeightedGraph, beta: Sequence[float]) -> float:
    """
    Density of beta; exactly 0 when H_beta is not positive definite.

    Args:
        graph: Weighted graph
        beta: One value per vertex

    Returns:
        Non-negative density value
    """
    value = log_density_nu(graph, beta)
    return 0.0 if value == float("-inf") else float(np.exp(value))


def marginal_params(graph: WeightedGraph, vertex: int) -> GigParams:
    """
    Law of a single beta_i.

    The Laplace transform with k supported on {i} is that of
    GIG(1/2, 2 theta_i^2, (eta_i + sum_j W_ij theta_j)^2 / 2).

    Args:
        graph: Weighted graph
        vertex: Vertex index

    Returns:
        GigParams of the marginal
    """
    pull = graph.eta[vertex] + float(graph.weight_matrix[vertex] @ graph.theta)
    return GigParams(a=2 * graph.theta[vertex] ** 2, b=pull * pull / 2)
