"""Exception types shared across the package."""


class FSPSError(Exception):
    pass


class ConfigurationError(FSPSError, ValueError):
    """A parameter lies outside its accepted range."""


class DomainError(FSPSError, ValueError):
    """A mathematical parameter lies outside the domain of a formula."""


class InputError(FSPSError, ValueError):
    """Array data violates a precondition (wrong dtype, complex density, ...)."""


class NumericError(FSPSError, ArithmeticError):
    """Non-finite values were encountered.

    ``index`` is the first offending sample, or None when unknown.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ContractionFailure(FSPSError, RuntimeError):
    """Picard iteration stopped contracting."""

    def __init__(self, message, increments):
        super().__init__(message)
        self.increments = list(increments)
