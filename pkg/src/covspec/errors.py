"""Exception hierarchy shared by all covspec modules."""


class CovspecError(Exception):
    """Base class for every error raised by covspec."""


class ValidationError(CovspecError, ValueError):
    """Malformed input: wrong shape, odd dimension, non-symmetric, nonpositive values."""


class DomainError(CovspecError, ValueError):
    """Input is well formed but outside the operation's mathematical domain."""


class ConditioningError(CovspecError, ArithmeticError):
    """Input is too ill-conditioned for the requested decomposition."""


class NotQuantumSpectrumError(CovspecError, ValueError):
    """The pairing graph has no perfect matching, so no quantum CM has this spectrum."""


class AmbiguousPairingError(CovspecError, ValueError):
    """The spectrum admits several pairings; ``parameter_sets`` lists all of them."""

    def __init__(self, message, parameter_sets=()):
        super().__init__(message)
        self.parameter_sets = list(parameter_sets)


class PreconditionError(CovspecError, ValueError):
    """A documented precondition of the operation does not hold."""


class StructuralError(CovspecError, RuntimeError):
    """A matrix does not have the structure a construction step relies on."""


class InconclusiveError(CovspecError, RuntimeError):
    """A witness search stopped without a certified answer.

    ``trace`` holds per-round diagnostics; ``tolerance_sensitive`` is set when
    the stop was caused by a quantity inside a tolerance band.
    """

    def __init__(self, message, trace=(), tolerance_sensitive=False):
        super().__init__(message)
        self.trace = list(trace)
        self.tolerance_sensitive = tolerance_sensitive


class SamplingExhausted(CovspecError, RuntimeError):
    """Rejection sampling ran out of attempts."""
