"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes (config 2, regime 3, truncation 4),
so new error kinds should subclass one of the classes below rather than
raising bare ValueError from library code.
"""


class CasimirLabError(Exception):
    """Base class for all library errors."""


class InvalidDimensionError(CasimirLabError):
    """A Hilbert-space dimension is too small or inconsistent."""


class DimensionMismatchError(CasimirLabError):
    """Operator/state dimensions do not match."""


class CapacityError(CasimirLabError):
    """A tensor product would exceed the configured dimension cap."""


class TruncationError(CasimirLabError):
    """Basis truncation too small: tail weight or leakage above guard."""


class RegimeError(CasimirLabError):
    """A formula was requested outside its regime of validity."""


class NearResonanceError(RegimeError):
    """A rotating-frame denominator is too close to zero."""


class IntegrationError(CasimirLabError):
    """The propagator failed (step underflow, negative density, ...)."""


class ConfigError(CasimirLabError):
    """An experiment configuration failed to parse or validate."""
