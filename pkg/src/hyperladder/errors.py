class HyperladderError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HyperladderError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConsistencyError(HyperladderError, AssertionError):
    """An identity that must hold by construction failed (a bug, not bad input)."""


class NumericError(HyperladderError, ArithmeticError):
    """A numerical procedure failed to converge or produced non-finite output."""
