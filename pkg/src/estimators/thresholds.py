"""
Recurrence Thresholds

Weight thresholds below which the fractional-moment series converges,
and the matching threshold on the initial weight of the ERRW.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln

from src.errors import BracketError
from src.estimators.moments import DEFAULT_EXPONENT, moment_constant

logger = logging.getLogger(__name__)

# Values reported in the literature, kept as comparators only.
REPORTED_WPRIME_FACTOR = 0.24
REPORTED_ERRW_THRESHOLDS = {3: 0.65}

BRACKET_LOW = 1e-12
BRACKET_HIGH_LIMIT = 1e8
ROOT_XTOL = 1e-15


def stated_moment_constant(theta: float) -> float:
    """Gamma(1/4) / (2^{1/3} sqrt(pi)) sqrt(theta), as printed in the literature."""
    return float(np.exp(gammaln(0.25) - np.log(2) / 3 - 0.5 * np.log(np.pi)) * np.sqrt(theta))


def displayed_bound(d: int) -> float:
    """sqrt(pi) / (Gamma(1/4) 2^{5/3} d), the closed expression behind the reported 0.24/d."""
    return float(np.exp(0.5 * np.log(np.pi) - gammaln(0.25) - 5 * np.log(2) / 3) / d)


@dataclass(frozen=True)
class ThresholdReport:
    """
    Weight thresholds for one dimension.

    Attributes:
        d: Lattice dimension
        theta: Vertex weight
        wprime_bar: Bound on E[W^{1/4}] for random weights
        w_bar_4: Bound on deterministic weights, wprime_bar^4
        moment_constant: E[G(0,0)^{1/4}] used to derive them
        stated_constant: The literature's version of that constant
        displayed_bound: The literature's closed expression for the bound
        reported_bound: The literature's numerical value, 0.24 / d
    """

    d: int
    theta: float
    wprime_bar: float
    w_bar_4: float
    moment_constant: float
    stated_constant: float
    displayed_bound: float
    reported_bound: float

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a CSV-ready dictionary."""
        return {
            "d": self.d,
            "theta": self.theta,
            "Wprime_bar": self.wprime_bar,
            "W_bar_4": self.w_bar_4,
            "moment_constant": self.moment_constant,
            "stated_constant": self.stated_constant,
            "displayed_bound": self.displayed_bound,
            "reported_bound": self.reported_bound,
        }


def _check_dimension(d: int) -> None:
    if int(d) != d or d < 1:
        raise ValueError(f"Dimension {d} must be a positive integer")


def threshold_W(d: int, theta: float = 1.0) -> ThresholdReport:
    """
    Wprime_bar = 1 / (2 d C) with C = moment_constant(theta, 1/4), W_bar_4 = Wprime_bar^4.

    Args:
        d: Lattice dimension
        theta: Vertex weight

    Returns:
        ThresholdReport with the literature comparators attached
    """
    _check_dimension(d)
    constant = moment_constant(theta, DEFAULT_EXPONENT)
    wprime = 1.0 / (2 * d * constant)
    return ThresholdReport(
        d=int(d),
        theta=float(theta),
        wprime_bar=wprime,
        w_bar_4=wprime ** 4,
        moment_constant=constant,
        stated_constant=stated_moment_constant(theta),
        displayed_bound=displayed_bound(d),
        reported_bound=REPORTED_WPRIME_FACTOR / d,
    )


def errw_moment(a: float) -> float:
    """E[W^{1/4}] for W ~ Gamma(a, 1), i.e. Gamma(a + 1/4) / Gamma(a)."""
    return float(np.exp(gammaln(a + 0.25) - gammaln(a)))


def threshold_errw(d: int) -> float:
    """
    Initial ERRW weight a with Gamma(a + 1/4) / Gamma(a) = threshold_W(d, 1).wprime_bar.

    The left side increases from 0, so the root is unique.

    Args:
        d: Lattice dimension

    Returns:
        a_bar > 0

    Raises:
        BracketError: If no sign change is found
    """
    _check_dimension(d)
    log_target = np.log(threshold_W(d, 1.0).wprime_bar)

    def gap(a: float) -> float:
        return float(gammaln(a + 0.25) - gammaln(a) - log_target)

    low, high = BRACKET_LOW, 1.0
    if gap(low) >= 0:
        raise BracketError(f"Threshold root for d={d} lies below {low}")
    while gap(high) <= 0:
        high *= 2
        if high > BRACKET_HIGH_LIMIT:
            raise BracketError(f"No sign change up to a={BRACKET_HIGH_LIMIT} for d={d}")
    root = float(bisect(gap, low, high, xtol=ROOT_XTOL, maxiter=500))
    logger.info("ERRW threshold d=%d: a_bar=%.6g", d, root)
    return root


def reported_errw_threshold(d: int) -> Optional[float]:
    """Literature value of the ERRW threshold, when one is reported."""
    return REPORTED_ERRW_THRESHOLDS.get(int(d))
