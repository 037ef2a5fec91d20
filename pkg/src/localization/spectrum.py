"""
Spectral Diagnostics

Eigen-decomposition of H with per-mode localization length and inverse
participation ratio, the shift D0 of the single-site law, and the decay of
the effective field at the center of growing boxes.
"""

import logging
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from src.graph_core.lattice import exterior_field_box
from src.green.operator import GreenMatrix, SchrodingerMatrix, assemble_H_batch, certify_batch
from src.models.estimate_report import EstimateReport
from src.models.spectral_report import SpectralReport
from src.models.weighted_graph import BoxSpec, WeightedGraph
from src.potential.sampler import sample_nu_batch
from src.utils.replicas import DEFAULT_BLOCK_SIZE, ReplicaPlan, run_values

logger = logging.getLogger(__name__)

MODULUS_FLOOR = 1e-12


def hop_distances(H: SchrodingerMatrix) -> np.ndarray:
    """Graph distance between vertices along the non-zero pattern of H."""
    pattern = (np.abs(H.weights) > 0).astype(float)
    return shortest_path(csr_matrix(pattern), directed=False, unweighted=True)


def _localization_length(psi: np.ndarray, distances: np.ndarray) -> float:
    modulus = np.abs(psi)
    peak = int(np.argmax(modulus))
    mask = (modulus > MODULUS_FLOOR) & np.isfinite(distances[peak])
    r = distances[peak][mask]
    if len(np.unique(r)) < 2:
        # supported on a single distance shell
        return 0.0
    slope = np.polyfit(r, np.log(modulus[mask]), 1)[0]
    return float(-1.0 / slope) if slope < 0 else float("inf")


def spectrum(H: SchrodingerMatrix, distances: Optional[np.ndarray] = None) -> SpectralReport:
    """
    Full eigen-decomposition of H with per-mode diagnostics.

    Args:
        H: Symmetric Schrodinger matrix
        distances: Optional (N, N) distance matrix, hop distances by default

    Returns:
        SpectralReport with ascending eigenvalues

    Raises:
        ValueError: If H is not symmetric
    """
    if not H.is_symmetric():
        raise ValueError("spectrum needs a symmetric matrix")
    eigenvalues, eigenvectors = linalg.eigh(H.matrix)
    if distances is None:
        distances = hop_distances(H)
    distances = np.asarray(distances, dtype=float)

    lengths = np.array([_localization_length(eigenvectors[:, k], distances) for k in range(H.size)])
    squares = eigenvectors ** 2
    iprs = np.sum(squares ** 2, axis=0) / np.sum(squares, axis=0) ** 2
    return SpectralReport(eigenvalues, eigenvectors, lengths, iprs)


def d0(G: GreenMatrix, i0: int) -> float:
    """
    D0 = sum over neighbors j of i0 of G(i0, j) / G(i0, i0).

    Args:
        G: Green matrix (its operator gives the neighbors)
        i0: Vertex

    Returns:
        Non-negative shift, 0 for an isolated vertex
    """
    neighbors = G.operator.neighbors(i0)
    return float(np.sum(G[i0, neighbors]) / G[i0, i0])


def _center_eta_block(graph: WeightedGraph, center: int, rng: np.random.Generator, size: int) -> np.ndarray:
    betas = sample_nu_batch(graph, size, rng).betas
    rest = np.delete(np.arange(graph.vertex_count), center)
    W = graph.weight_matrix
    H = assemble_H_batch(W[np.ix_(rest, rest)], betas[:, rest])
    certify_batch(H)
    field = np.broadcast_to(graph.eta[rest], (size, len(rest)))[..., None]
    solved = np.linalg.solve(H, field)[..., 0]
    return graph.eta[center] + solved @ W[center, rest]


def center_eta_check(
    d: int,
    sides: Sequence[int],
    W: float,
    theta: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> List[Tuple[int, EstimateReport]]:
    """
    Effective field eta_check = eta_0 + <W_0., G_{box minus 0} eta> at the center.

    Boxes carry the field of a surrounding lattice with constant theta, so
    the trend over growing sides shows how the field seen by the center dies out.

    Args:
        d: Lattice dimension
        sides: Half-widths of the boxes
        W: Edge weight
        theta: Vertex weight
        n_samples: Replicas per box
        seed: Master seed (shared by all boxes)
        workers: Worker processes
        block_size: Replicas per seeded block

    Returns:
        (side, EstimateReport) pairs in input order
    """
    if not sides:
        raise ValueError("At least one box side is required")
    out = []
    for side in sides:
        spec = BoxSpec(d, int(side))
        graph = exterior_field_box(spec, W, theta)
        center = graph.index_of(spec.center)
        kernel = partial(_center_eta_block, graph, center)
        report = EstimateReport.from_samples(
            run_values(kernel, ReplicaPlan(n_samples, seed, block_size), workers), seed
        )
        logger.info("eta_check at the center, side %d: %r", side, report)
        out.append((int(side), report))
    return out
