"""
Sequential Potential Sampler

Exact sampling of beta ~ nu^{W,theta,eta} by one-site conditioning.

Vertices are visited in the order (v_1, ..., v_N). The marginal of beta on
S_k = {v_1, ..., v_k} is again of the same family, with the field
eta^{(k)} = eta + W_{., S_k^c} theta_{S_k^c}. Given beta on S_{k-1}, the
new site contributes gamma_k = beta_{v_k} - <w, G_S w> / 2, where w are the
weights from v_k into S_{k-1} and G_S = (H_{S,S})^{-1}; gamma_k is
GIG(1/2, 2 theta^2, eta_check^2 / 2) with eta_check = eta^{(k)}_{v_k} + <w, G_S eta^{(k)}_S>.

G_S is grown by Schur-complement updates. Every update adds products of
non-negative numbers, which keeps exponentially small off-diagonal entries
accurate to relative precision.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from src.errors import SamplerError
from src.models.potential_sample import PotentialBatch, PotentialSample, as_order
from src.models.weighted_graph import WeightedGraph
from src.potential.gig import gig_half_rvs

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-10
FIELD_TOL = 1e-12


def _check_step(W: np.ndarray, betas: np.ndarray, G: np.ndarray, size: int, tol: float) -> None:
    """Raise if H_{S,S} G_S deviates from the identity on the first ``size`` sites."""
    H = -W[:, :size, :size].copy()
    idx = np.arange(size)
    H[:, idx, idx] = 2 * betas[:, :size]
    Gs = G[:, :size, :size]
    residual = np.abs(H @ Gs - np.eye(size))
    scale = np.max(np.abs(H), axis=(1, 2)) * np.max(np.abs(Gs), axis=(1, 2))
    worst = np.max(residual, axis=(1, 2)) / np.maximum(1.0, scale)
    if np.any(worst > tol):
        raise SamplerError(f"H G != I after {size} sites (scaled residual {worst.max():.3g})")


def sample_block(
    weights: np.ndarray,
    theta: np.ndarray,
    eta: np.ndarray,
    order: np.ndarray,
    size: int,
    rng: np.random.Generator,
    verify_steps: bool = False,
    identity_tol: float = IDENTITY_TOL,
) -> tuple:
    """
    Draw ``size`` independent potentials.

    Args:
        weights: (N, N) weight matrix, or (size, N, N) for per-replica weights
        theta: (N,) vertex weights
        eta: (N,) boundary field
        order: Sampling order (v_1, ..., v_N)
        size: Number of replicas
        rng: Random generator
        verify_steps: Check H_{S,S} G_S = I after every site
        identity_tol: Scaled tolerance for that check

    Returns:
        Tuple (betas, greens) in the original vertex numbering, shapes
        (size, N) and (size, N, N)

    Raises:
        SamplerError: On a non-positive gamma or a negative eta_check
    """
    n = len(order)
    perm = np.asarray(order)
    W = np.broadcast_to(weights, (size, n, n))[:, perm[:, None], perm[None, :]]
    th = np.asarray(theta, dtype=float)[perm]
    et = np.asarray(eta, dtype=float)[perm]

    # tail[:, j, p] = sum_{m >= p} W_{j, v_m} theta_{v_m}
    contrib = W * th[None, None, :]
    tail = np.cumsum(contrib[:, :, ::-1], axis=2)[:, :, ::-1]

    betas = np.empty((size, n))
    G = np.zeros((size, n, n))
    a = 2.0 * th * th

    for p in range(n):
        field = np.broadcast_to(et[:p + 1], (size, p + 1)).copy()
        if p + 1 < n:
            field += tail[:, :p + 1, p + 1]
        if p == 0:
            quad = np.zeros(size)
            eta_check = field[:, 0].copy()
        else:
            w = W[:, p, :p]
            u = np.einsum("nij,nj->ni", G[:, :p, :p], w)
            quad = np.einsum("ni,ni->n", w, u)
            eta_check = field[:, p] + np.einsum("ni,ni->n", u, field[:, :p])

        if np.any(eta_check < -FIELD_TOL * np.maximum(1.0, np.abs(field[:, p]))):
            raise SamplerError(f"Negative eta_check at step {p}: {eta_check.min():.3g}")
        eta_check = np.maximum(eta_check, 0.0)

        gamma = gig_half_rvs(a=a[p], b=0.5 * eta_check * eta_check, rng=rng)
        if np.any(~np.isfinite(gamma)) or np.any(gamma <= 0):
            raise SamplerError(f"Non-positive Schur complement at step {p}")

        betas[:, p] = gamma + 0.5 * quad
        s = 2.0 * gamma
        if p > 0:
            G[:, :p, :p] += u[:, :, None] * u[:, None, :] / s[:, None, None]
            G[:, :p, p] = u / s[:, None]
            G[:, p, :p] = G[:, :p, p]
        G[:, p, p] = 1.0 / s

        if verify_steps:
            _check_step(W, betas, G, p + 1, identity_tol)

    out_betas = np.empty_like(betas)
    out_betas[:, perm] = betas
    out_greens = np.empty_like(G)
    out_greens[:, perm[:, None], perm[None, :]] = G
    return out_betas, out_greens


def sample_nu_batch(
    graph: WeightedGraph,
    size: int,
    rng: np.random.Generator,
    order: Optional[Sequence[int]] = None,
    with_green: bool = False,
    weights: Optional[np.ndarray] = None,
    verify_steps: bool = False,
) -> PotentialBatch:
    """
    Draw a block of independent potentials on one graph.

    Args:
        graph: Weighted graph (theta, eta and edges)
        size: Number of replicas
        rng: Random generator
        order: Sampling order, natural vertex order when omitted
        with_green: Keep the Green matrices produced by the updates
        weights: Optional (size, N, N) per-replica weights on the same edges
        verify_steps: Check the identity after every site

    Returns:
        PotentialBatch
    """
    if size < 1:
        raise ValueError(f"Block size {size} must be positive")
    perm = as_order(order, graph.vertex_count)
    W = graph.weight_matrix if weights is None else weights
    betas, greens = sample_block(
        W, graph.theta, graph.eta, perm, size, rng, verify_steps=verify_steps
    )
    logger.debug("Sampled %d potentials on %r", size, graph)
    return PotentialBatch(betas=betas, elimination_order=perm, greens=greens if with_green else None)


def sample_nu(
    graph: WeightedGraph,
    order: Optional[Sequence[int]],
    rng: np.random.Generator,
    seed: Optional[int] = None,
) -> PotentialSample:
    """
    Draw one potential.

    Args:
        graph: Weighted graph
        order: Sampling order (None for the default)
        rng: Random generator
        seed: Seed recorded in the sample for provenance

    Returns:
        PotentialSample
    """
    batch = sample_nu_batch(graph, 1, rng, order=order, verify_steps=True)
    return batch.sample(0, seed=seed)
