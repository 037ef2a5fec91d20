"""
Experiments Module

Configured experiment runs and their CSV artifacts.
"""

from src.experiments.runner import ExperimentRunner, RunOutcome, run_experiment, save_outcome

__all__ = ["ExperimentRunner", "RunOutcome", "run_experiment", "save_outcome"]
