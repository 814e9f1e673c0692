"""Exception types raised across the package."""


class RobustPulseError(Exception):
    """Base class for all package errors."""


class InvalidInputError(RobustPulseError, ValueError):
    pass


class DomainError(RobustPulseError, ValueError):
    """Argument outside the interval where the operation is defined."""


class DegenerateSpectrumError(RobustPulseError, ArithmeticError):
    pass


class ResolutionError(RobustPulseError, ArithmeticError):
    """Time stepping is too coarse for the requested pulse."""


class AliasingError(RobustPulseError, ValueError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class UnsupportedDimensionError(RobustPulseError, ValueError):
    pass


class NumericalError(RobustPulseError, ArithmeticError):
    pass
