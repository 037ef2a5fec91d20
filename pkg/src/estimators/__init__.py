"""
Estimators Module

Fractional moments, decay fits, recurrence thresholds and path-law tests.
"""

from src.estimators.moments import (
    axis_targets,
    coupling_variance,
    fit_decay,
    fractional_moment,
    moment_constant,
    stated_variance_formula,
    variance_check,
    variance_formula,
)
from src.estimators.thresholds import (
    ThresholdReport,
    errw_moment,
    reported_errw_threshold,
    threshold_errw,
    threshold_W,
)
from src.estimators.path_tests import path_prefix_test, prefix_table

__all__ = [
    "axis_targets",
    "coupling_variance",
    "fit_decay",
    "fractional_moment",
    "moment_constant",
    "stated_variance_formula",
    "variance_check",
    "variance_formula",
    "ThresholdReport",
    "errw_moment",
    "reported_errw_threshold",
    "threshold_errw",
    "threshold_W",
    "path_prefix_test",
    "prefix_table",
]
