"""
Exception hierarchy for Butterfly Router.

Every error raised by the package derives from ButterflyError so the
pipeline can catch the whole family at its boundary. Errors that describe
a bad input value also derive from ValueError.
"""

from typing import Optional


class ButterflyError(Exception):
    """
    Base class for all Butterfly Router errors.

    Args:
        message (str): Human readable description.
        cause (Optional[BaseException]): Underlying exception, if any.
    """

    def __init__(self, message: str, cause: Optional[BaseException] = None) -> None:
        super().__init__(message)
        self.cause = cause


class TopologyError(ButterflyError, ValueError):
    pass


class PermutationError(ButterflyError, ValueError):
    pass


class SortingNetworkError(ButterflyError, ValueError):
    pass


class ConfigError(ButterflyError, ValueError):
    pass


class ScheduleError(ButterflyError):
    """Raised when a layer cannot be applied to a placement."""

    def __init__(self, message: str, layer_index: Optional[int] = None,
                 cause: Optional[BaseException] = None) -> None:
        super().__init__(message, cause)
        self.layer_index = layer_index


class ColoringError(ButterflyError):
    pass


class BenesError(ButterflyError):
    pass


class RoutingError(ButterflyError):
    pass


class CompilationError(ButterflyError):
    pass
