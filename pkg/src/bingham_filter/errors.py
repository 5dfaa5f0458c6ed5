"""Exception types raised by the library."""


class BinghamError(Exception):
    """Base class for all library errors."""


class DomainError(BinghamError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConcentrationOverflowError(BinghamError, ArithmeticError):
    """The requested distribution is too concentrated to represent (z1 < -1e6)."""
