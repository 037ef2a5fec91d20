"""
Errors

Exception types raised by the numerical modules.
"""


class NotPositiveDefiniteError(ValueError):
    """The Schrodinger matrix has no Cholesky factorization."""


class SamplerError(RuntimeError):
    """The sequential sampler met a non-positive Schur complement or a negative field."""


class SingularSystemError(ValueError):
    """A Dirichlet problem on the conductance network has no unique solution."""


class DegenerateComparisonError(ValueError):
    """A two-sample comparison collapsed to a single bin."""


class BracketError(RuntimeError):
    """A root is not bracketed by the search interval."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


class ConfigError(ValueError):
    """The experiment configuration is invalid."""
