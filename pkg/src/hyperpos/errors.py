"""Exception hierarchy shared by every module."""


class HyperposError(Exception):
    """Base class for all errors raised by hyperpos."""


class DomainError(HyperposError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """A denominator Pochhammer symbol or gamma factor vanishes."""


class ConvergenceError(HyperposError, ArithmeticError):
    """A series or quadrature failed to settle within its budget."""


class SearchError(HyperposError):
    """A zero search exhausted its range without finding a sign change."""
