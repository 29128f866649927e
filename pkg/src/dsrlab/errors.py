"""Exception hierarchy shared by every dsrlab module."""


class DsrlabError(Exception):
    """Base class for all library errors."""


class DomainError(DsrlabError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class NonConvergence(DsrlabError, RuntimeError):
    """An iterative numerical routine failed to meet its tolerance."""


class NoSignChange(DsrlabError, ValueError):
    """A root bracket does not contain a sign change."""


class ValidityViolation(DsrlabError, ValueError):
    """A closed-form construction is used outside its validity range.

    Attributes
    ----------
    bound : float
        The largest admissible value of the offending parameter.
    value : float
        The value that was supplied.
    """

    def __init__(self, message, bound, value):
        super().__init__(message)
        self.bound = bound
        self.value = value


class ConfigError(DsrlabError, ValueError):
    """An experiment configuration is malformed."""


class IoError(DsrlabError, OSError):
    """Output files could not be written."""
