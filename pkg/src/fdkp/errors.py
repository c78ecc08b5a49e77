"""Exception types shared across the package."""


class FdkpError(Exception):
    """Base class for all package errors."""


class NonPositiveSymbol(FdkpError):
    """Kernel symbol is zero or negative where a positive value is required."""


class NonFiniteSymbol(FdkpError):
    """A Fourier multiplier evaluated to NaN or infinity on the grid."""


class SingularLongWave(FdkpError):
    """KP long-wave dispersion requested at k = 0, where it is singular."""


class WrongModelOrder(FdkpError):
    """Operation requires a first-order (or second-order) model of the other kind."""


class SubcriticalSpeed(FdkpError):
    """Solitary waves require c > 1."""


class DomainTooNarrow(FdkpError):
    """Periodic domain too short for the sech tails to decay below tolerance."""


class IncommensurateWavenumber(FdkpError):
    """Transverse wavenumber is not an integer multiple of 2*pi/Ly."""


class UnstableRun(FdkpError):
    """Time integration produced NaN or overflow."""

    def __init__(self, message, last_time=None):
        super().__init__(message)
        self.last_time = last_time


class EigensolveFailure(FdkpError):
    """Generalized eigenvalue solve did not converge."""


class NoGrowthWindow(FdkpError):
    """No usable linear-growth window found in a perturbed trajectory."""


class ConfigError(FdkpError):
    """Invalid experiment configuration."""
