"""
Laplace and Ward Identities

Closed forms of E[exp(-<k, beta>)] and of the Ward functional Xi, with their
Monte-Carlo counterparts over exact samples of beta.
"""

import logging
from functools import partial
from typing import Optional, Sequence

import numpy as np

from src.models.estimate_report import EstimateReport
from src.models.potential_sample import LaplacePoint
from src.models.weighted_graph import WeightedGraph
from src.potential.sampler import sample_nu_batch
from src.utils.replicas import DEFAULT_BLOCK_SIZE, ReplicaPlan, run_values

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100


def _as_point(graph: WeightedGraph, k) -> LaplacePoint:
    point = k if isinstance(k, LaplacePoint) else LaplacePoint(np.asarray(k, dtype=float))
    if len(point.k) != graph.vertex_count:
        raise ValueError(f"k has {len(point.k)} entries for {graph.vertex_count} vertices")
    return point


def edge_interaction(graph: WeightedGraph, shifted: np.ndarray) -> float:
    """
    sum over edges of W_ij (sqrt(x_i x_j) - theta_i theta_j) with x = theta^2 + k.

    Args:
        graph: Weighted graph
        shifted: theta^2 + k per vertex

    Returns:
        Edge interaction term
    """
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    theta = graph.theta
    return float(np.sum(graph.weights * (np.sqrt(shifted[i] * shifted[j]) - theta[i] * theta[j])))


def laplace_closed(graph: WeightedGraph, k) -> float:
    """
    Closed-form Laplace transform E[exp(-sum k_i beta_i)].

    Args:
        graph: Weighted graph (eta allowed)
        k: LaplacePoint or per-vertex array

    Returns:
        Value in (0, 1]
    """
    point = _as_point(graph, k)
    theta = graph.theta
    shifted = theta * theta + point.k
    root = np.sqrt(shifted)
    exponent = -float(graph.eta @ (root - theta)) - edge_interaction(graph, shifted)
    return float(np.exp(exponent + np.sum(np.log(theta) - np.log(root))))


def _require_no_field(graph: WeightedGraph) -> None:
    if np.any(graph.eta != 0):
        raise ValueError("Ward identity is stated for eta = 0")


def _check_vertices(graph: WeightedGraph, *vertices: int) -> None:
    for v in vertices:
        if not 0 <= v < graph.vertex_count:
            raise ValueError(f"Vertex {v} outside the graph")


def xi_closed_form(graph: WeightedGraph, k: np.ndarray, i0: int, l: int) -> float:
    """
    Right-hand side of the Ward identity, also valid for l = i0.

    prod_{i != i0} theta_i / prod_{i != l} sqrt(k_i + theta_i^2)
    times exp(-edge interaction).
    """
    theta = graph.theta
    shifted = theta * theta + k
    log_num = float(np.sum(np.log(theta)) - np.log(theta[i0]))
    log_den = float(0.5 * (np.sum(np.log(shifted)) - np.log(shifted[l])))
    return float(np.exp(log_num - log_den - edge_interaction(graph, shifted)))


def ward_xi_closed(graph: WeightedGraph, k, i0: int, l: int) -> float:
    """
    Closed form of E[Xi(k, W, beta)] under nu^{W,theta,0}.

    With k = 0 it reduces to E[G(i0, l) / G(i0, i0)] = theta_l / theta_i0.

    Args:
        graph: Weighted graph with eta = 0
        k: LaplacePoint or per-vertex array
        i0: Reference vertex
        l: Second vertex, distinct from i0

    Returns:
        Positive value
    """
    if l == i0:
        raise ValueError("Ward identity needs l != i0")
    _check_vertices(graph, i0, l)
    _require_no_field(graph)
    return xi_closed_form(graph, _as_point(graph, k).k, i0, l)


def _laplace_block(graph: WeightedGraph, k: np.ndarray, order, rng: np.random.Generator, size: int) -> np.ndarray:
    betas = sample_nu_batch(graph, size, rng, order=order).betas
    return np.exp(-(betas @ k))


def _xi_block(graph: WeightedGraph, k: np.ndarray, i0: int, l: int, order,
              rng: np.random.Generator, size: int) -> np.ndarray:
    batch = sample_nu_batch(graph, size, rng, order=order, with_green=True)
    G = batch.greens
    g00 = G[:, i0, i0]
    return (G[:, i0, l] / g00) * np.exp(k[i0] / (2 * g00) - batch.betas @ k)


def _check_samples(n_samples: int) -> None:
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples={n_samples} must be at least {MIN_SAMPLES}")


def laplace_mc(
    graph: WeightedGraph,
    k,
    n_samples: int,
    seed: int,
    workers: int = 1,
    order: Optional[Sequence[int]] = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> EstimateReport:
    """
    Monte-Carlo mean of exp(-sum k_i beta_i).

    Args:
        graph: Weighted graph
        k: LaplacePoint or per-vertex array
        n_samples: Number of replicas (at least 100)
        seed: Master seed
        workers: Worker processes
        order: Sampling order
        block_size: Replicas per seeded block

    Returns:
        EstimateReport
    """
    _check_samples(n_samples)
    point = _as_point(graph, k)
    plan = ReplicaPlan(n_samples, seed, block_size)
    values = run_values(partial(_laplace_block, graph, np.array(point.k), order), plan, workers)
    report = EstimateReport.from_samples(values, seed)
    logger.info("Laplace MC: %r", report)
    return report


def ward_xi_mc(
    graph: WeightedGraph,
    k,
    i0: int,
    l: int,
    n_samples: int,
    seed: int,
    workers: int = 1,
    order: Optional[Sequence[int]] = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> EstimateReport:
    """
    Monte-Carlo mean of Xi = G(i0,l)/G(i0,i0) exp(k_i0 / (2 G(i0,i0)) - sum k_i beta_i).

    Args:
        graph: Weighted graph with eta = 0
        k: LaplacePoint or per-vertex array
        i0: Reference vertex
        l: Second vertex, distinct from i0
        n_samples: Number of replicas (at least 100)
        seed: Master seed
        workers: Worker processes
        order: Sampling order
        block_size: Replicas per seeded block

    Returns:
        EstimateReport
    """
    if l == i0:
        raise ValueError("Ward identity needs l != i0")
    _check_vertices(graph, i0, l)
    _require_no_field(graph)
    _check_samples(n_samples)
    point = _as_point(graph, k)
    plan = ReplicaPlan(n_samples, seed, block_size)
    values = run_values(partial(_xi_block, graph, np.array(point.k), i0, l, order), plan, workers)
    report = EstimateReport.from_samples(values, seed)
    logger.info("Ward MC: %r", report)
    return report
