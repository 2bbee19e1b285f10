"""Exception types raised by dyadic-averaging.

Every error derives from DyadicAveragingError and from the builtin that best
describes it, so callers can catch either.
"""


class DyadicAveragingError(Exception):
    """Base class for all package errors."""


class UnsupportedOrderError(DyadicAveragingError, ValueError):
    """Requested Daubechies order is outside the tabulated range."""


class CascadeConstructionError(DyadicAveragingError, RuntimeError):
    """The refinement eigenproblem at the integers did not produce a solution."""


class ResolutionError(DyadicAveragingError, ValueError):
    """An operation needs a finer grid, deeper sampling or more margin."""


class AlignmentError(DyadicAveragingError, ValueError):
    """Domain endpoints do not lie on the required dyadic lattice."""


class DomainRangeError(DyadicAveragingError, ValueError):
    """A dyadic interval or wavelet support falls outside the domain."""


class MultiplierIndexError(DyadicAveragingError, IndexError):
    """A multiplier sequence does not cover the required indices."""


class UnsupportedIndexError(DyadicAveragingError, ValueError):
    """Smoothness parameters outside what a quasi-norm supports (e.g. F with p=inf)."""


class SizeGuardError(DyadicAveragingError, ValueError):
    """A brute-force reference was asked for a problem that is too large."""


class ConfigError(DyadicAveragingError, ValueError):
    """Invalid experiment configuration or corpus specification."""


class InsufficientDataError(DyadicAveragingError, ValueError):
    """Too few usable rows for a growth-exponent fit."""
