"""Exception hierarchy shared by every module."""


class FHGaussError(Exception):
    """Base class for all library errors."""


class ConfigError(FHGaussError, ValueError):
    """Invalid weight parameters or run configuration."""


class ExponentOutOfRange(ConfigError):
    pass


class DuplicateSingularity(ConfigError):
    pass


class BadConfig(ConfigError):
    pass


class NumericalError(FHGaussError, ArithmeticError):
    """A computation could not reach the requested accuracy."""


class SingularEvaluation(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class PrecisionExhausted(NumericalError):
    pass


class RealAxisPole(NumericalError):
    pass


class DegenerateR(NumericalError):
    pass


class DivisionBreakdown(NumericalError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StepCollision(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass
