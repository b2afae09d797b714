class HeckesumError(Exception):
    pass


class InvalidArgument(HeckesumError, ValueError):
    pass


class OutOfRange(HeckesumError, IndexError):
    pass


class PreconditionError(HeckesumError, ValueError):
    pass


class ConfigurationError(HeckesumError):
    pass


class CacheValidationError(HeckesumError):
    pass


class InsufficientData(HeckesumError, ValueError):
    pass


class BudgetExceeded(HeckesumError):
    """Quadrature could not reach the requested tolerance; carries the best estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
