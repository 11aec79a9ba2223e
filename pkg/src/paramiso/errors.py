"""Exception types shared across the package."""


class ParamisoError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(ParamisoError, ValueError):
    """A physical or numerical parameter is out of its valid range."""


class DivergentInductanceError(InvalidParameterError):
    """Flux bias sits at (or crosses) a point where the SQUID inductance diverges."""


class SingularNetworkError(ParamisoError):
    """A network matrix could not be inverted.

    Parameters
    ----------
    message : str
    freq : float, optional
        Signal frequency [rad/s] at which the singularity occurred.
    """

    def __init__(self, message, freq=None):
        if freq is not None:
            message = f"{message} (signal frequency {freq:.6g} rad/s)"
        super().__init__(message)
        self.freq = freq


class InfeasibleWindowError(InvalidParameterError):
    """Requested isolation bandwidth exceeds the filter bandwidth."""


class ResolutionError(ParamisoError):
    """A time-domain trace is too short for the requested spectral analysis."""


class ConfigError(ParamisoError):
    """A run configuration failed validation.

    Carries the offending field name so front ends can report it precisely.
    """

    def __init__(self, field, message):
        super().__init__(f"config field '{field}': {message}")
        self.field = field
