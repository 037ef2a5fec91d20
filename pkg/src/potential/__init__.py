"""
Potential Module

Density, exact sampling and Laplace/Ward oracles of the random potential.
"""

from src.potential.gig import gig_half_rvs, sample_gig
from src.potential.density import density_nu, log_density_nu, marginal_params
from src.potential.sampler import sample_block, sample_nu, sample_nu_batch
from src.potential.ward import (
    laplace_closed,
    laplace_mc,
    ward_xi_closed,
    ward_xi_mc,
    xi_closed_form,
)

__all__ = [
    "gig_half_rvs",
    "sample_gig",
    "density_nu",
    "log_density_nu",
    "marginal_params",
    "sample_block",
    "sample_nu",
    "sample_nu_batch",
    "laplace_closed",
    "laplace_mc",
    "ward_xi_closed",
    "ward_xi_mc",
    "xi_closed_form",
]
