"""Exception hierarchy for the distcost toolkit.

The CLI maps these onto distinct exit codes (see ``distcost.cli``):
configuration/validation problems, file parse problems, and numerical
failures are kept separate so scripts can react to each.
"""


class DistcostError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(DistcostError):
    """Operands have incompatible or non-conforming shapes."""


class DomainError(DistcostError):
    """An argument lies outside the mathematical domain of the operation
    (non-finite entries, negative horizon, evaluation outside [0, t_f], ...).
    """


class ValidationError(DistcostError):
    """A constructed object violates a structural invariant, e.g. an
    uncontrollable (A, B) pair."""


class ModelParseError(DistcostError):
    """A model or config file could not be parsed; the message names the
    offending field or row."""


class ConfigError(DistcostError):
    """Invalid run configuration handed to the CLI layer."""


class NumericalError(DistcostError):
    """An iterative numerical procedure failed to reach its target.

    Carries whatever diagnostic the procedure could salvage: ``estimate``
    (best value so far), ``error_bound`` (its residual/error estimate) and
    ``iterations`` where meaningful.
    """

    def __init__(self, message, estimate=None, error_bound=None, iterations=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
        self.iterations = iterations


class IllConditionedError(NumericalError):
    """A Gramian (or similar operator) is numerically singular for the
    requested horizon."""
