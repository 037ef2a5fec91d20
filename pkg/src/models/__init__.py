"""
Data models for the VRJP potential lab.
"""

from src.models.weighted_graph import BoxSpec, WeightedGraph
from src.models.weight_law import WeightLaw
from src.models.potential_sample import GigParams, LaplacePoint, PotentialBatch, PotentialSample
from src.models.trajectory import LocalTimes, Trajectory
from src.models.estimate_report import DecayFit, EstimateReport, FractionalMomentRow
from src.models.spectral_report import SingleSiteDensity, SpectralReport

__all__ = [
    "BoxSpec",
    "WeightedGraph",
    "WeightLaw",
    "GigParams",
    "LaplacePoint",
    "PotentialBatch",
    "PotentialSample",
    "LocalTimes",
    "Trajectory",
    "DecayFit",
    "EstimateReport",
    "FractionalMomentRow",
    "SingleSiteDensity",
    "SpectralReport",
]
