"""
Single-Site Law

Density of the potential at one site given the rest, its edge CDF, and
the regularity exponent of that CDF at the edge of the support.
"""

import logging
import warnings
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import erf

from src.errors import QuadratureError
from src.models.spectral_report import SingleSiteDensity

logger = logging.getLogger(__name__)

EDGE_GRID = (1e-6, 1e-1)
GRID_POINTS = 25
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-12


def single_site_density(params: SingleSiteDensity, u: Union[float, Sequence[float]]):
    """
    g(u) = theta / sqrt(2 pi (u - D0)) * exp(-(u - D0) theta^2 / 2) for u > D0, else 0.

    Args:
        params: theta and D0
        u: Point or array of points

    Returns:
        Density value(s), shaped like u
    """
    u = np.asarray(u, dtype=float)
    x = u - params.d0
    inside = x > 0
    safe = np.where(inside, x, 1.0)
    value = params.theta / np.sqrt(2 * np.pi * safe) * np.exp(-0.5 * params.theta ** 2 * safe)
    out = np.where(inside, value, 0.0)
    return float(out) if out.ndim == 0 else out


def _regular_part(params: SingleSiteDensity, x: float) -> float:
    return params.theta / np.sqrt(2 * np.pi) * np.exp(-0.5 * params.theta ** 2 * x)


def _quad(func, low: float, high: float, **kwargs) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, _ = quad(func, low, high, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200, **kwargs)
        except IntegrationWarning as exc:
            raise QuadratureError(f"Quadrature on [{low}, {high}] failed: {exc}") from exc
    if not np.isfinite(value):
        raise QuadratureError(f"Quadrature on [{low}, {high}] returned {value}")
    return float(value)


def quadrature_cdf(params: SingleSiteDensity, x: float) -> float:
    """
    F(x) = integral of g over [D0, D0 + x], with the (u - D0)^{-1/2} edge handled by the weight.

    Raises:
        QuadratureError: If the integration does not converge
    """
    if x <= 0:
        return 0.0
    return _quad(lambda v: _regular_part(params, v), 0.0, float(x), weight="alg", wvar=(-0.5, 0.0))


def total_mass(params: SingleSiteDensity) -> float:
    """Integral of g over (D0, inf) by quadrature."""
    split = 1.0 / params.theta ** 2
    return quadrature_cdf(params, split) + _quad(lambda v: single_site_density(params, params.d0 + v), split, np.inf)


def edge_cdf(params: SingleSiteDensity, x: Union[float, Sequence[float]]):
    """Closed-form CDF at D0 + x: erf(theta sqrt(x / 2))."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    out = erf(params.theta * np.sqrt(x / 2))
    return float(out) if out.ndim == 0 else out


def edge_grid(theta: float, points: int = GRID_POINTS) -> np.ndarray:
    """Log grid near the edge, shrunk by 1/theta^2 for large theta."""
    scale = min(1.0, 1.0 / theta ** 2)
    return np.logspace(np.log10(EDGE_GRID[0] * scale), np.log10(EDGE_GRID[1] * scale), points)


def tau_regularity(params: SingleSiteDensity, grid: Optional[Sequence[float]] = None) -> float:
    """
    Slope of log F(x) against log x near the edge of the support.

    Args:
        params: theta and D0
        grid: Points x > 0, edge_grid(theta) by default

    Returns:
        Fitted exponent (about 1/2)

    Raises:
        QuadratureError: If an integration fails
    """
    xs = edge_grid(params.theta) if grid is None else np.asarray(grid, dtype=float)
    if np.any(xs <= 0) or len(xs) < 2:
        raise ValueError("The grid needs at least two positive points")
    cdf = np.array([quadrature_cdf(params, x) for x in xs])
    slope = float(np.polyfit(np.log(xs), np.log(cdf), 1)[0])
    logger.debug("Edge exponent for theta=%g, D0=%g: %.4f", params.theta, params.d0, slope)
    return slope
