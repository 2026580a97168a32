"""Exception types shared across the package."""


class BreakwaveError(Exception):
    """Base class for runtime failures (CLI exit code 3)."""


class KernelError(BreakwaveError, ValueError):
    """A kernel functional or convolution is undefined for this kernel."""


class KernelWindowError(KernelError):
    """The kernel has not decayed within the truncated domain."""

    def __init__(self, message: str, required_L: float):
        super().__init__(message)
        self.required_L = required_L


class DomainError(BreakwaveError, ValueError):
    """A state left the domain of the flux model (e.g. u <= -1 for the drift)."""

    def __init__(self, message: str, u=None, x=None, t=None):
        super().__init__(message)
        self.u, self.x, self.t = u, x, t


class ThresholdError(BreakwaveError, ValueError):
    """Threshold quantity requested outside its admissible parameter range."""


class CFLError(BreakwaveError, ValueError):
    pass


class BoundaryContaminationError(BreakwaveError):
    """The solution reached the edge of the truncated periodic domain."""


class UnderResolvedError(BreakwaveError, ValueError):
    """Initial data is already as steep as the breaking threshold on this grid."""


class ConfigError(Exception):
    """Scenario configuration cannot be resolved (CLI exit code 2)."""
