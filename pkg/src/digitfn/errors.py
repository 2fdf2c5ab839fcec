"""Exception types raised across the package."""


class DigitFnError(Exception):
    """Base class for all package errors."""


class InvalidBaseError(DigitFnError, ValueError):
    pass


class UnsupportedBlockError(DigitFnError, ValueError):
    pass


class InputError(DigitFnError, ValueError):
    pass


class CompositionError(DigitFnError, ValueError):
    pass


class DomainError(DigitFnError, ValueError):
    pass


class NotQuasiMultiplicativeError(DigitFnError):
    pass


class MinimizationConflictError(DigitFnError):
    pass


class RepresentationNotCanonicalError(DigitFnError):
    pass


class DisconnectedTransducerError(DigitFnError):
    pass


class SpectralRadiusError(DigitFnError):
    """The B-series diverges at x = 1/q, so the resolvent is singular."""


class ConvergenceError(DigitFnError):
    pass
