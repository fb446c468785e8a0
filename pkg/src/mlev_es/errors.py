class MlevError(Exception):
    """Base class for all errors raised by mlev_es."""


class InvalidDimensionError(MlevError, ValueError):
    pass


class InterpolationError(MlevError, ValueError):
    """Upscale operator preconditions violated (too few points, downscaling)."""


class GridMismatchError(MlevError, ValueError):
    pass


class NumericalDegeneracyError(MlevError, FloatingPointError):
    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class EvaluationError(MlevError, FloatingPointError):
    """Objective returned a non-finite value."""

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = dict(context or {})


class ConfigError(MlevError, ValueError):
    pass


class StatisticsError(MlevError, ValueError):
    pass
