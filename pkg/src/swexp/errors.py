"""Exception hierarchy shared by every module."""


class SWError(ValueError):
    """Base class for all toolkit errors."""


class NegativeProbability(SWError):
    pass


class ZeroMass(SWError):
    pass


class NonFinite(SWError):
    pass


class DeltaOutOfRange(SWError):
    pass


class DimensionMismatch(SWError):
    pass


class IncompatibleMetric(SWError):
    """Metric vanishes on a pair that the source can emit."""


class RaggedInput(SWError):
    pass


class NotConverged(SWError):
    pass


class EnumerationTooLarge(SWError):
    """Exact enumeration would exceed the hard size guard."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class BlocklengthTooLarge(EnumerationTooLarge):
    pass


class IterationBudgetExceeded(SWError):
    pass
