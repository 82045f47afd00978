"""Exception hierarchy shared across the package."""


class TailDepError(Exception):
    """Base class for all taildep errors."""


class ParameterError(TailDepError, ValueError):
    """A parameter is outside its admissible range (theta, p, grid size, ...)."""


class DomainError(TailDepError, ValueError):
    """An evaluation point is outside the function's domain."""


class DataError(TailDepError, ValueError):
    """Input data is malformed or insufficient (CSV panels, sample arrays)."""


class ConfigError(TailDepError, ValueError):
    """An estimator/pipeline configuration is inconsistent with the data."""


class InfeasibleError(TailDepError, ValueError):
    """A constraint system admits no solution (incompatible pins)."""


class UnboundedError(TailDepError, RuntimeError):
    """A linear program is unbounded in the optimization direction."""
