"""Exception hierarchy. The CLI maps these onto exit codes."""


class TensorRadiusError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(TensorRadiusError, ValueError):
    pass


class DimensionCapExceeded(TensorRadiusError):
    pass


class SizeCapExceeded(TensorRadiusError):
    pass


class UnboundedBody(TensorRadiusError, ValueError):
    pass


class InfeasibleBody(TensorRadiusError, ValueError):
    pass


class NotPolyhedral(TensorRadiusError):
    """Raised when an exact polyhedral routine is asked about a curved ball."""


class NotSupported(TensorRadiusError):
    pass


class ToleranceAmbiguous(TensorRadiusError):
    """Near-contact points sit too close to the contact tolerance to classify."""


class InfeasibleDecomposition(TensorRadiusError):
    pass


class NotCertifiable(TensorRadiusError):
    pass


class NoConvergence(TensorRadiusError):
    """Iteration cap hit. ``partial`` holds the best result found so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
