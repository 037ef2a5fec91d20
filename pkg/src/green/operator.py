"""
Schrodinger Operator

Assembly of H = 2[beta] - Delta_W and its inversion through a Cholesky
factorization, which doubles as the positive-definiteness certificate.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from src.errors import NotPositiveDefiniteError
from src.models.weighted_graph import WeightedGraph

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SchrodingerMatrix:
    """
    Dense symmetric matrix with diagonal 2 beta_i and off-diagonal -W_ij.

    Attributes:
        matrix: (N, N) array
    """

    matrix: np.ndarray

    def __post_init__(self):
        """Validate the shape and freeze the array."""
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def size(self) -> int:
        """Number of vertices."""
        return len(self.matrix)

    @property
    def potential(self) -> np.ndarray:
        """beta recovered from the diagonal."""
        return np.diag(self.matrix) / 2

    @property
    def weights(self) -> np.ndarray:
        """Edge-weight matrix recovered from the off-diagonal."""
        off = -self.matrix.copy()
        np.fill_diagonal(off, 0.0)
        return off

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        """Symmetry check relative to the largest entry."""
        scale = max(1.0, float(np.max(np.abs(self.matrix))))
        return bool(np.max(np.abs(self.matrix - self.matrix.T)) <= tol * scale)

    def neighbors(self, vertex: int) -> np.ndarray:
        """Vertices j != vertex with H(vertex, j) != 0."""
        row = self.matrix[vertex].copy()
        row[vertex] = 0.0
        return np.flatnonzero(row)


@dataclass(frozen=True, eq=False)
class GreenMatrix:
    """
    G = H^{-1} together with the Cholesky factor that certifies H > 0.

    Attributes:
        matrix: (N, N) symmetric inverse
        cholesky: Lower-triangular L with H = L L^T
        operator: The inverted operator
    """

    matrix: np.ndarray
    cholesky: np.ndarray
    operator: SchrodingerMatrix

    def __getitem__(self, index):
        return self.matrix[index]

    @property
    def size(self) -> int:
        """Number of vertices."""
        return len(self.matrix)

    def identity_residual(self) -> float:
        """max |H G - I| over all entries."""
        product = self.operator.matrix @ self.matrix
        return float(np.max(np.abs(product - np.eye(self.size))))

    def log_det_operator(self) -> float:
        """log det H from the factor."""
        return float(2 * np.sum(np.log(np.diag(self.cholesky))))


def assemble_H(graph: WeightedGraph, beta: Sequence[float]) -> SchrodingerMatrix:
    """
    Assemble H_beta = 2[beta] - Delta_W.

    Args:
        graph: Weighted graph
        beta: One value per vertex

    Returns:
        SchrodingerMatrix
    """
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if len(beta) != graph.vertex_count:
        raise ValueError(f"beta has {len(beta)} entries for {graph.vertex_count} vertices")
    matrix = -np.array(graph.weight_matrix)
    matrix[np.diag_indices_from(matrix)] = 2 * beta
    return SchrodingerMatrix(matrix)


def assemble_H_batch(weight_matrix: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """
    Stack of H matrices for many potentials.

    Args:
        weight_matrix: (N, N) or (n, N, N) weights
        betas: (n, N) potentials

    Returns:
        (n, N, N) array
    """
    betas = np.asarray(betas, dtype=float)
    H = -np.broadcast_to(weight_matrix, betas.shape + (betas.shape[-1],)).copy()
    idx = np.arange(betas.shape[-1])
    H[:, idx, idx] = 2 * betas
    return H


def cholesky_factor(H: SchrodingerMatrix) -> np.ndarray:
    """
    Lower Cholesky factor of H.

    Raises:
        NotPositiveDefiniteError: If H is not positive definite
    """
    try:
        return linalg.cholesky(H.matrix, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NotPositiveDefiniteError(f"H is not positive definite: {exc}") from exc


def green(H: SchrodingerMatrix) -> GreenMatrix:
    """
    Invert H through its Cholesky factorization.

    Args:
        H: Symmetric Schrodinger matrix

    Returns:
        GreenMatrix carrying the factor as certificate

    Raises:
        ValueError: If H is not symmetric
        NotPositiveDefiniteError: If the factorization fails
    """
    if not H.is_symmetric():
        raise ValueError("H must be symmetric")
    factor = cholesky_factor(H)
    inverse = linalg.cho_solve((factor, True), np.eye(H.size))
    inverse = (inverse + inverse.T) / 2
    inverse.setflags(write=False)
    return GreenMatrix(matrix=inverse, cholesky=factor, operator=H)


def certify_batch(H: np.ndarray) -> None:
    """
    Cholesky-factor every member of a stack of H matrices.

    Raises:
        NotPositiveDefiniteError: If any member is not positive definite
    """
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"A stacked H is not positive definite: {exc}") from exc


def green_batch(graph: WeightedGraph, betas: np.ndarray) -> np.ndarray:
    """
    Green matrices of many potentials on one graph.

    Every stack member is certified by a Cholesky factorization before
    inversion.

    Args:
        graph: Weighted graph
        betas: (n, N) potentials

    Returns:
        (n, N, N) array of inverses

    Raises:
        NotPositiveDefiniteError: If any member is not positive definite
    """
    H = assemble_H_batch(graph.weight_matrix, betas)
    certify_batch(H)
    G = np.linalg.inv(H)
    return (G + np.swapaxes(G, -1, -2)) / 2
