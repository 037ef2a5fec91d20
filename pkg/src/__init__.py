"""
VRJP Potential Lab Package

Reproducible numerical experiments on the vertex-reinforced jump process,
edge-reinforced random walk and the random Schrodinger potential that
mixes them.
"""

__version__ = "0.1.0"
__author__ = "VRJP Potential Lab Team"

from src.models.weighted_graph import WeightedGraph
from src.potential.sampler import sample_nu
from src.experiments.runner import ExperimentRunner
from src.cli.cli import cli

__all__ = [
    "WeightedGraph",
    "sample_nu",
    "ExperimentRunner",
    "cli",
]
