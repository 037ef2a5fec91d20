"""
Estimate Report Model

Monte-Carlo means with their standard errors, and the exponential decay
fit built on top of them.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class EstimateReport:
    """
    Monte-Carlo estimate.

    Attributes:
        estimate: Sample mean
        stderr: Sample standard deviation divided by sqrt(n)
        n: Number of replicas
        seed: Master seed of the run
    """

    estimate: float
    stderr: float
    n: int
    seed: Optional[int] = None

    def __post_init__(self):
        """Validate the report."""
        if self.n < 1:
            raise ValueError(f"Replica count {self.n} must be positive")
        if not self.stderr >= 0:
            raise ValueError(f"Standard error {self.stderr} must be non-negative")

    @classmethod
    def from_samples(cls, values: Sequence[float], seed: Optional[int] = None) -> "EstimateReport":
        """
        Summarize per-replica values.

        Args:
            values: One value per replica
            seed: Master seed of the run

        Returns:
            EstimateReport with mean and standard error
        """
        values = np.asarray(values, dtype=float).reshape(-1)
        n = len(values)
        if n == 0:
            raise ValueError("Cannot summarize an empty sample")
        mean = float(np.sum(values) / n)
        stderr = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return cls(estimate=mean, stderr=stderr, n=n, seed=seed)

    def z_score(self, reference: float) -> float:
        """
        Distance to a reference value in standard errors.

        Args:
            reference: Exact value to compare against

        Returns:
            |estimate - reference| / stderr (0 or inf when stderr is 0)
        """
        gap = abs(self.estimate - reference)
        if self.stderr == 0:
            return 0.0 if gap <= 1e-12 * max(1.0, abs(reference)) else float("inf")
        return gap / self.stderr

    def agrees_with(self, reference: float, multiplier: float = 4.0) -> bool:
        """Whether the estimate is within ``multiplier`` standard errors of a reference."""
        return self.z_score(reference) <= multiplier

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a CSV-ready dictionary."""
        return {"estimate": self.estimate, "stderr": self.stderr, "n": self.n, "seed": self.seed}

    def __repr__(self) -> str:
        """Return a string representation of the report."""
        return f"EstimateReport({self.estimate:.6g} ± {self.stderr:.2g}, n={self.n})"


@dataclass(frozen=True)
class FractionalMomentRow:
    """
    Fractional moment at one target.

    Attributes:
        target: Lattice offset x from the box center
        distance: l1 lattice distance |x|
        report: Estimate of E[G(0, x)^s]
    """

    target: Tuple[int, ...]
    distance: int
    report: EstimateReport

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a CSV-ready dictionary."""
        row = {"target": " ".join(str(c) for c in self.target), "distance": self.distance}
        row.update(self.report.to_dict())
        return row


@dataclass(frozen=True)
class DecayFit:
    """
    Least-squares fit of log-estimates against |x|.

    Attributes:
        kappa: Fitted decay rate (minus the slope)
        r_squared: Coefficient of determination
        points: (|x|, log estimate) pairs used in the fit
    """

    kappa: float
    r_squared: float
    points: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        """Validate the fit."""
        if not -1e-12 <= self.r_squared <= 1 + 1e-12:
            raise ValueError(f"R^2 = {self.r_squared} outside [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a CSV-ready dictionary."""
        return {"kappa": self.kappa, "r_squared": self.r_squared, "points": len(self.points)}
