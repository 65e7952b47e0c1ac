"""Exception hierarchy shared by all modules.

Each class maps to one CLI exit code (see :mod:`twinbeam.cli`).
"""


class TwinBeamError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


class ConfigError(TwinBeamError, ValueError):
    exit_code = 2


class DomainError(TwinBeamError, ValueError):
    """An argument outside the mathematical domain of an operation."""


class DispersionDomainError(DomainError):
    """A wavelength or temperature outside the Sellmeier model's validity."""


class PhaseMatchingError(TwinBeamError):
    """No quasi-phase-matched root in the scanned band."""


class ResolutionError(TwinBeamError, ValueError):
    """A feature is too narrow to be resolved on the current grid."""


class NumericalError(TwinBeamError, ArithmeticError):
    pass


class ResourceError(TwinBeamError):
    """Refusal to run an enumeration or allocation above the built-in caps."""

    exit_code = 4


class EstimatorWarning(UserWarning):
    """Statistical estimate computed under poor conditioning."""
