"""
Localization Module

Spectral diagnostics of H and regularity of the single-site law.
"""

from src.localization.spectrum import center_eta_check, d0, hop_distances, spectrum
from src.localization.single_site import (
    edge_cdf,
    edge_grid,
    quadrature_cdf,
    single_site_density,
    tau_regularity,
    total_mass,
)

__all__ = [
    "center_eta_check",
    "d0",
    "hop_distances",
    "spectrum",
    "edge_cdf",
    "edge_grid",
    "quadrature_cdf",
    "single_site_density",
    "tau_regularity",
    "total_mass",
]
