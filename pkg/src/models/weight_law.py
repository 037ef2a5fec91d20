"""
Weight Law Model

Law of the lattice edge weights: a deterministic value or independent
Gamma(a, 1) draws per edge.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np


@dataclass(frozen=True)
class WeightLaw:
    """
    Edge-weight law of a lattice box.

    Attributes:
        kind: 'deterministic' or 'gamma'
        value: The weight W (deterministic) or the shape a (gamma)
    """

    kind: str
    value: float

    KINDS = ("deterministic", "gamma")

    def __post_init__(self):
        """Validate the law."""
        if self.kind not in self.KINDS:
            raise ValueError(f"Unknown weight law '{self.kind}', expected one of {self.KINDS}")
        if not self.value > 0:
            raise ValueError(f"Weight law parameter {self.value} must be positive")

    @property
    def is_random(self) -> bool:
        """Whether weights are drawn per replica."""
        return self.kind == "gamma"

    def draw(self, multiplicity: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draw weights for edges that aggregate ``multiplicity`` lattice edges.

        A wired edge collecting m missing lattice edges gets the sum of m
        independent lattice weights, i.e. Gamma(m a, 1).

        Args:
            multiplicity: (E,) positive integers
            rng: Random generator
            size: Number of replicas

        Returns:
            (size, E) array of weights
        """
        multiplicity = np.asarray(multiplicity, dtype=float)
        if not self.is_random:
            return np.broadcast_to(self.value * multiplicity, (size, len(multiplicity))).copy()
        return rng.gamma(self.value * multiplicity, 1.0, size=(size, len(multiplicity)))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a plain dictionary."""
        return {"kind": self.kind, "value": self.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WeightLaw":
        """Create from a dictionary with keys kind and value."""
        return cls(kind=str(data.get("kind", "deterministic")), value=float(data["value"]))
