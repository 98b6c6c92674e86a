"""Exception types shared across the package."""


class WgqedError(Exception):
    """Base class for all errors raised by this package."""


class BelowCutoff(WgqedError):
    """A frequency below the mode cutoff was passed where a propagating mode is required."""


class AtCutoffSingularity(WgqedError):
    """Evaluation requested at (or too close to) a band edge where the density of states diverges."""


class QuadratureFailure(WgqedError):
    """Adaptive quadrature could not reach the requested tolerance."""


class StepTooLarge(WgqedError):
    """Integrator step violates the step <= min(delay)/10 constraint."""


class NormViolation(WgqedError):
    """The excited-state amplitude exceeded the single-excitation norm bound."""


class RecurrenceHorizonExceeded(WgqedError):
    """Requested evolution time exceeds the reliable window of the discretized continuum."""


class NormDrift(WgqedError):
    """Total single-excitation norm drifted beyond tolerance during k-space integration."""


class ConfigError(WgqedError):
    """Scenario configuration is missing, malformed, or inconsistent."""
