"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class FuzzyVOIError(Exception):
    """Base class for every error raised by this package."""


class InvariantError(FuzzyVOIError, ValueError):
    """A value violates the invariants of its type."""


class ParseError(FuzzyVOIError):
    """A problem file or literal could not be decoded."""


class NumericError(FuzzyVOIError, ArithmeticError):
    """A numerical operation has no defined result."""


class ZeroMarginalError(NumericError):
    """The observation has zero probability under every state with positive prior."""


class DivergentIntegralError(NumericError):
    """An integral over the real line does not converge."""
