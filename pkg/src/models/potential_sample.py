"""
Potential Sample Model

Realizations of the random potential beta and the small parameter records
used by the sampler and the Laplace/Ward oracles.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class GigParams:
    """
    Generalized inverse Gaussian law with index 1/2.

    Density proportional to gamma^(-1/2) exp(-(a gamma + b / gamma) / 2).

    Attributes:
        a: Coefficient of gamma, equal to 2 theta^2
        b: Coefficient of 1/gamma, equal to eta_check^2 / 2
    """

    a: float
    b: float = 0.0

    LAMBDA = 0.5

    def __post_init__(self):
        """Validate the parameters."""
        if not self.a > 0:
            raise ValueError(f"GIG parameter a={self.a} must be positive")
        if not self.b >= 0:
            raise ValueError(f"GIG parameter b={self.b} must be non-negative")

    @property
    def is_gamma(self) -> bool:
        """True when the law reduces to Gamma(1/2, rate a/2)."""
        return self.b == 0

    def pdf(self, x: np.ndarray) -> np.ndarray:
        """
        Normalized density, using the closed-form normalization
        sqrt(a / (2 pi)) exp(sqrt(a b)).

        Args:
            x: Evaluation points

        Returns:
            Density values, zero for x <= 0
        """
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        positive = x > 0
        xp = x[positive]
        log_norm = 0.5 * np.log(self.a / (2 * np.pi)) + np.sqrt(self.a * self.b)
        out[positive] = np.exp(
            log_norm - 0.5 * np.log(xp) - 0.5 * (self.a * xp + self.b / xp)
        )
        return out

    def mean(self) -> float:
        """Mean of the law."""
        if self.is_gamma:
            return 1.0 / self.a
        c = np.sqrt(self.b / self.a)
        return float(c + 1.0 / self.a)

    def var(self) -> float:
        """Variance of the law, sqrt(b) / a^{3/2} + 2 / a^2."""
        return float(np.sqrt(self.b) / self.a ** 1.5 + 2.0 / self.a ** 2)


@dataclass(frozen=True)
class LaplacePoint:
    """
    Point k at which the Laplace transform E[exp(-sum k_i beta_i)] is evaluated.

    Attributes:
        k: Non-negative per-vertex values
    """

    k: np.ndarray

    def __post_init__(self):
        """Validate and freeze k."""
        k = np.asarray(self.k, dtype=float).reshape(-1)
        if not np.all(np.isfinite(k)) or np.any(k < 0):
            raise ValueError("Laplace point must have finite non-negative entries")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @classmethod
    def constant(cls, vertex_count: int, value: float) -> "LaplacePoint":
        """Same value on every vertex."""
        return cls(np.full(vertex_count, float(value)))

    @classmethod
    def at(cls, vertex_count: int, vertex: int, value: float) -> "LaplacePoint":
        """Value on a single vertex, zero elsewhere."""
        k = np.zeros(vertex_count)
        k[vertex] = value
        return cls(k)


@dataclass(frozen=True, eq=False)
class PotentialSample:
    """
    One realization of beta.

    Attributes:
        beta: Per-vertex potential
        elimination_order: Order (v_1, ..., v_N) used by the sampler
        seed: Master seed of the stream that produced the sample
    """

    beta: np.ndarray
    elimination_order: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        """Validate the order against beta."""
        beta = np.asarray(self.beta, dtype=float).reshape(-1)
        order = np.asarray(self.elimination_order, dtype=np.int64).reshape(-1)
        if sorted(order.tolist()) != list(range(len(beta))):
            raise ValueError("elimination_order must be a permutation of the vertices")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "elimination_order", order)

    def to_frame(self) -> pd.DataFrame:
        """Table with columns vertex, beta."""
        return pd.DataFrame({"vertex": np.arange(len(self.beta)), "beta": self.beta})

    def __repr__(self) -> str:
        """Return a short description."""
        return f"PotentialSample(N={len(self.beta)}, seed={self.seed})"


@dataclass(frozen=True, eq=False)
class PotentialBatch:
    """
    A block of independent samples drawn with one elimination order.

    Attributes:
        betas: (n, N) potentials
        elimination_order: Order used for every row
        greens: (n, N, N) Green matrices from the sampler, when requested
    """

    betas: np.ndarray
    elimination_order: np.ndarray
    greens: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.betas)

    def sample(self, index: int, seed: Optional[int] = None) -> PotentialSample:
        """Extract one row as a PotentialSample."""
        return PotentialSample(self.betas[index], self.elimination_order, seed)

    def to_frame(self, replica_offset: int = 0) -> pd.DataFrame:
        """Long table with columns replica, vertex, beta."""
        n, vertices = self.betas.shape
        return pd.DataFrame(
            {
                "replica": np.repeat(np.arange(n) + replica_offset, vertices),
                "vertex": np.tile(np.arange(vertices), n),
                "beta": self.betas.reshape(-1),
            }
        )


def as_order(order: Optional[Sequence[int]], vertex_count: int) -> np.ndarray:
    """
    Normalize an elimination order.

    The default is the natural vertex order, which samples row-major
    lattice sites first and the boundary vertex last, so the boundary
    vertex is eliminated first.

    Args:
        order: Permutation or None
        vertex_count: Number of vertices

    Returns:
        Order as an integer array
    """
    if order is None:
        return np.arange(vertex_count)
    order_arr = np.asarray(order, dtype=np.int64).reshape(-1)
    if sorted(order_arr.tolist()) != list(range(vertex_count)):
        raise ValueError(f"Order {order_arr.tolist()} is not a permutation of {vertex_count} vertices")
    return order_arr
