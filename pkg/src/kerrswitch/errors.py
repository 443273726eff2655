"""Exception and warning types shared across the package."""


class KerrSwitchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(KerrSwitchError, ValueError):
    """A value violates a documented invariant (bad parameter, bad config field)."""


class ParseError(KerrSwitchError, ValueError):
    """A config document is malformed or contains unknown keys in strict mode."""


class GridTooSmall(ValidationError):
    """Pulse does not fit the time grid (fwhm >= window / 4)."""


class NegativeEnergy(ValidationError):
    """Requested pulse energy is negative."""


class GridMismatch(KerrSwitchError, ValueError):
    """Two envelopes that must share a time grid do not."""


class NonConvergence(KerrSwitchError, RuntimeError):
    """Step-doubling residual of the propagator exceeded the accepted bound."""


class NoBracket(KerrSwitchError, RuntimeError):
    """Calibration could not bracket a usable efficiency maximum."""


class NoCrossing(KerrSwitchError, ValueError):
    """A response curve never crosses the requested threshold on one side."""


class EmptySpan(KerrSwitchError, ValueError):
    """The requested level lies above the curve maximum."""


class ZeroEnergy(KerrSwitchError, ValueError):
    """Operation undefined for a zero-energy envelope."""


class NoCoincidences(KerrSwitchError, ValueError):
    """Efficiency estimate requested with zero coincidence counts."""


class ZeroNoise(KerrSwitchError, ValueError):
    """Noise-limited SNR is undefined when the noise rate is zero."""


class DegenerateBins(KerrSwitchError, ValueError):
    """Fewer than 4 histogram bins span the spectral support."""


class CutoffTooSmall(UserWarning):
    """Photon-number cutoff truncates more probability mass than advertised."""
