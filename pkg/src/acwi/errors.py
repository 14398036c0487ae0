"""Exception hierarchy shared across the package."""


class AcwiError(Exception):
    """Base class for all package errors."""


class ConfigError(AcwiError, ValueError):
    """Invalid configuration, shapes, or arguments."""


class NumericError(AcwiError, ArithmeticError):
    """A loss or gradient became non-finite."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class UsageError(AcwiError, RuntimeError):
    """An operation was called in a state that does not allow it."""


class DegenerateInputError(AcwiError, ValueError):
    """Input data carries no information for the requested analysis."""
