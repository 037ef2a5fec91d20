"""
Process Simulation Module

VRJP, its time change, ERRW and the quenched jump process, with exact
trajectory densities.
"""

from src.process_sim.vrjp import StopRule, inverse_time_change, simulate_vrjp, skeleton, time_change
from src.process_sim.errw import sample_gamma_weights, simulate_errw
from src.process_sim.quenched import jump_rates, simulate_quenched_jump, sojourn_rates
from src.process_sim.densities import (
    density_fX_annealed,
    density_fX_quenched,
    density_fZ,
    edge_energy,
    log_density_fZ,
    sojourn_exponents,
)

__all__ = [
    "StopRule",
    "inverse_time_change",
    "simulate_vrjp",
    "skeleton",
    "time_change",
    "sample_gamma_weights",
    "simulate_errw",
    "jump_rates",
    "simulate_quenched_jump",
    "sojourn_rates",
    "density_fX_annealed",
    "density_fX_quenched",
    "density_fZ",
    "edge_energy",
    "log_density_fZ",
    "sojourn_exponents",
]
