"""Exception hierarchy shared by every module."""


class WaveguideMemoryError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WaveguideMemoryError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedOperationError(WaveguideMemoryError, ValueError):
    """The operation has no meaning for the requested reservoir kind."""


class DivergentRateError(WaveguideMemoryError, ValueError):
    """The Markovian decay rate does not exist (zero spectral width)."""


class TruncationError(WaveguideMemoryError, ValueError):
    """A kernel series is too short for the requested amplitude order."""


class ConfigurationError(WaveguideMemoryError, ValueError):
    """Solver configuration violates a resolution or size guard."""


class NumericalInstabilityError(WaveguideMemoryError, ArithmeticError):
    """The integration produced a non-finite value."""

    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"non-finite amplitude at z={z:.6g}")


class IntegratorFailureError(WaveguideMemoryError, ArithmeticError):
    """Norm drift of the discretized-bath integration exceeded tolerance."""


class UnderflowError(WaveguideMemoryError, ArithmeticError):
    """Amplitude too small to take a logarithm."""
