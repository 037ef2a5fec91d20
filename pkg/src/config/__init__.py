"""
Configuration Module

YAML experiment configuration with per-subcommand defaults.
"""

from src.config.experiment_config import (
    COMMANDS,
    ConfigLoader,
    EstimatorSection,
    ExperimentConfig,
    GraphSection,
    Tolerances,
    command_defaults,
    merge,
)

__all__ = [
    "COMMANDS",
    "ConfigLoader",
    "EstimatorSection",
    "ExperimentConfig",
    "GraphSection",
    "Tolerances",
    "command_defaults",
    "merge",
]
