"""
GIG Sampler

Exact draws from the generalized inverse Gaussian law with index 1/2,
density proportional to x^(-1/2) exp(-(a x + b / x) / 2).

For b > 0 the reciprocal of such a variable is inverse Gaussian with mean
sqrt(a / b) and shape a, which is sampled with the Michael-Schucany-Haas
transformation. The transformation is written in terms of c = sqrt(b / a)
so that b = 0 needs no special branch: it reduces to z^2 / a, the
Gamma(1/2, rate a/2) draw.
"""

from typing import Union

import numpy as np

from src.models.potential_sample import GigParams

ArrayLike = Union[float, np.ndarray]


def gig_half_rvs(*, a: ArrayLike, b: ArrayLike, rng: np.random.Generator) -> np.ndarray:
    """
    Vectorized GIG(1/2, a, b) draws.

    Args:
        a: Positive coefficient of x
        b: Non-negative coefficient of 1/x
        rng: Random generator

    Returns:
        Array with the broadcast shape of a and b
    """
    aa = np.asarray(a, dtype=float)
    bb = np.asarray(b, dtype=float)
    if np.any(~np.isfinite(aa)) or np.any(aa <= 0):
        raise ValueError("a must be finite and > 0")
    if np.any(~np.isfinite(bb)) or np.any(bb < 0):
        raise ValueError("b must be finite and >= 0")

    shape = np.broadcast(aa, bb).shape
    z = rng.standard_normal(size=shape)
    u = rng.uniform(size=shape)

    c = np.sqrt(bb / aa)
    q = z * z / (2.0 * aa)
    # reciprocal of the smaller root of the inverse Gaussian quadratic
    upper = c + q + np.sqrt(q * (q + 2.0 * c))
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(upper > 0, c * c / upper, 0.0)
    keep_upper = u * (upper + c) <= upper
    return np.where(keep_upper, upper, lower)


def sample_gig(params: GigParams, rng: np.random.Generator) -> float:
    """
    One exact GIG(1/2, a, b) draw.

    Args:
        params: Law parameters
        rng: Random generator

    Returns:
        Positive sample
    """
    return float(gig_half_rvs(a=params.a, b=params.b, rng=rng))
