"""Exception hierarchy.

The CLI maps :class:`ValidationError` subclasses to exit status 2 and
:class:`NumericalError` subclasses to exit status 3.
"""


class KobageoError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(KobageoError, ValueError):
    """Bad input: malformed points, parameters or configuration."""


class InputError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class DomainError(ValidationError):
    """A point lies outside (or on the boundary of) the domain."""


class InvalidSubspaceError(ValidationError):
    pass


class LocalizerError(ValidationError):
    pass


class ScheduleError(ValidationError):
    pass


class NumericalError(KobageoError, RuntimeError):
    """A numerical procedure could not deliver its contract."""


class SamplingError(NumericalError):
    pass


class SearchFailure(NumericalError):
    pass


class DegeneratePathError(NumericalError):
    pass


class ReparametrizationError(NumericalError):
    pass


class CertificateInfeasible(NumericalError):
    pass


class GapNotClosed(NumericalError):
    """The path optimizer could not bring upper - lower below kappa."""

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class MapValidityError(NumericalError):
    pass
