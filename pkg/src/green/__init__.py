"""
Green Module

Schrodinger matrix assembly, Green function, random walk expansion and the
conductance network.
"""

from src.green.operator import (
    GreenMatrix,
    SchrodingerMatrix,
    assemble_H,
    assemble_H_batch,
    certify_batch,
    green,
    green_batch,
)
from src.green.expansion import expansion_error_bound, rw_expansion, transfer_radius
from src.green.conductance import (
    conductances,
    effective_conductance,
    return_probability,
    transition_matrix,
)

__all__ = [
    "GreenMatrix",
    "SchrodingerMatrix",
    "assemble_H",
    "assemble_H_batch",
    "certify_batch",
    "green",
    "green_batch",
    "expansion_error_bound",
    "rw_expansion",
    "transfer_radius",
    "conductances",
    "effective_conductance",
    "return_probability",
    "transition_matrix",
]
