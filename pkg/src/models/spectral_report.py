"""
Spectral Report Model

Eigen-decomposition summaries of the Schrodinger matrix and the
single-site law at the edge of its support.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """
    Full symmetric eigen-decomposition with per-mode diagnostics.

    Attributes:
        eigenvalues: Ascending eigenvalues
        eigenvectors: Orthonormal eigenvectors as columns
        localization_lengths: Inverse decay rate of each mode (inf if not decaying)
        iprs: Inverse participation ratio of each mode
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    localization_lengths: np.ndarray
    iprs: np.ndarray

    @property
    def size(self) -> int:
        """Number of modes."""
        return len(self.eigenvalues)

    def median_ipr(self) -> float:
        """Median IPR over all modes."""
        return float(np.median(self.iprs))

    def median_localization_length(self) -> float:
        """Median localization length over all modes."""
        return float(np.median(self.localization_lengths))

    def to_frame(self) -> pd.DataFrame:
        """Table with columns index, eigenvalue, localization_length, ipr."""
        return pd.DataFrame(
            {
                "index": np.arange(self.size),
                "eigenvalue": self.eigenvalues,
                "localization_length": self.localization_lengths,
                "ipr": self.iprs,
            }
        )


@dataclass(frozen=True)
class SingleSiteDensity:
    """
    Conditional law of the potential 2 beta_0 at one site, supported on [D0, inf).

    Attributes:
        theta: Vertex weight at the site
        d0: Shift D0 = sum over neighbors of G(0, j) / G(0, 0)
    """

    theta: float
    d0: float = 0.0

    def __post_init__(self):
        """Validate parameters."""
        if not self.theta > 0:
            raise ValueError(f"theta={self.theta} must be positive")
        if not np.isfinite(self.d0):
            raise ValueError("D0 must be finite")
