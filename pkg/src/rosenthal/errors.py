"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes (see :mod:`rosenthal.cli`).
"""


class RosenthalError(Exception):
    """Base class for all library errors."""


class DomainError(RosenthalError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class TruncationError(RosenthalError, ArithmeticError):
    """A series could not be truncated within the configured term budget."""


class RegimeError(RosenthalError, ValueError):
    """An asymptotic bound was requested below the floor where it holds."""


class SolverError(RosenthalError, ArithmeticError):
    """A root finder failed to converge."""


class ConsistencyError(RosenthalError, AssertionError):
    """An internal identity that must hold exactly was violated."""
