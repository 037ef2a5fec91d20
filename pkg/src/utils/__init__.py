"""
Utility functions for the VRJP potential lab.
"""

from src.utils.replicas import ReplicaPlan, as_generator, run_blocks, run_values

__all__ = ["ReplicaPlan", "as_generator", "run_blocks", "run_values"]
