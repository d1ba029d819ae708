"""Exception types shared across the toolkit."""


class HardykitError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(HardykitError):
    """Raised when observable and state subsystem dimensions disagree."""


class UnknownLabel(HardykitError):
    """Raised when an outcome label is not part of an observable's spectrum."""


class MalformedMeasure(HardykitError):
    """Raised when finite-measure weights are negative or not normalized."""


class InvalidQVector(HardykitError):
    """Raised when a probability vector component lies outside [0, 1]."""


class NotEntangled(HardykitError):
    """Raised when a product state is passed where entanglement is required."""


class MaximallyEntangled(HardykitError):
    """Raised when a maximally entangled state is passed to the zero-probability construction."""


class NoSolution(HardykitError):
    """Raised when the constraint solver cannot reach the requested residual."""


class NoCrossing(HardykitError):
    """Raised when a bisection target is never reached on the given interval."""
