"""
Exception hierarchy for full_house.

Every error carries a stable ``code`` and the process ``exit_code`` the command
line reports for it.

Author: Ron Webb
Since: 1.0.0
"""

from typing import Sequence


class FullHouseError(Exception):
    """Base class for all errors raised by full_house."""

    code = "E_FULL_HOUSE"
    exit_code = 1

    def __init__(self, message: str, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(FullHouseError, ValueError):
    """Input data failed validation."""

    code = "E_VALIDATION"
    exit_code = 2

    def __init__(
        self, message: str, code: str | None = None, rows: Sequence[int] = ()
    ) -> None:
        self.rows = tuple(rows)
        if self.rows:
            shown = ", ".join(str(row) for row in self.rows[:10])
            more = " ..." if len(self.rows) > 10 else ""
            message = f"{message} (rows {shown}{more})"
        super().__init__(message, code)


class DomainError(FullHouseError, ValueError):
    """An argument lies outside the domain of an operation."""

    code = "E_DOMAIN"
    exit_code = 2


class RangeError(DomainError):
    """A year lies outside the range covered by a series or season set."""

    code = "E_RANGE"


class InsufficientDataError(DomainError):
    """Too few observations for the requested estimate."""

    code = "E_INSUFFICIENT_DATA"


class InsufficientTailError(InsufficientDataError):
    """Too few observations to select the number of upper-tail points."""

    code = "E_INSUFFICIENT_TAIL"


class EmptySeasonError(InsufficientDataError):
    """No player in a season passes the qualification rule."""

    code = "E_EMPTY_SEASON"


class DegenerateFitError(DomainError):
    """A parametric fit was requested on identical values."""

    code = "E_DEGENERATE_FIT"


class NumericalError(FullHouseError, ArithmeticError):
    """A numerical routine failed to produce a usable result."""

    code = "E_NUMERICAL"
    exit_code = 3


class SingularEstimateError(NumericalError):
    """The extreme-value moment estimate is singular."""

    code = "E_SINGULAR_ESTIMATE"


class TailFitError(NumericalError):
    """The upper-tail regression design is collinear."""

    code = "E_TAIL_FIT"
