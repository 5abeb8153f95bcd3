"""Exception types raised across the package."""


class QConverseError(ValueError):
    """Base class for all errors raised by qconverse."""


class NonHermitian(QConverseError):
    pass


class NotPsd(QConverseError):
    pass


class DimensionMismatch(QConverseError):
    pass


class ZeroOperator(QConverseError):
    pass


class SupportViolation(QConverseError):
    pass


class NotTracePreserving(QConverseError):
    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"sum K^dag K deviates from identity by {self.deviation:.3e} (Frobenius)")


class BadProbability(QConverseError):
    pass


class BadDimensions(QConverseError):
    pass


class TooLarge(QConverseError):
    pass


class NotConverged(QConverseError):
    pass


class RateBelowCapacity(QConverseError):
    pass


class ConstraintViolated(QConverseError):
    pass
