"""Exception hierarchy.

Every exception carries an ``exit_code`` used by the command line front end:
2 for input/schema problems, 3 for numerical failures, 4 for configuration
errors.
"""

from __future__ import annotations


class TvmeffError(Exception):
    exit_code = 3


# -- input / schema --------------------------------------------------------

class InputError(TvmeffError, ValueError):
    exit_code = 2


class ParseError(InputError):
    pass


class GapError(InputError):
    pass


class DuplicateError(InputError):
    pass


class InsufficientData(InputError):
    pass


class RangeError(InputError, IndexError):
    pass


class ShapeError(InputError):
    pass


# -- numerical ---------------------------------------------------------------

class NumericError(TvmeffError, ArithmeticError):
    pass


class SingularError(NumericError):
    pass


class DegenerateSeriesError(NumericError):
    pass


class UnitRootBoundaryError(NumericError):
    """I - sum(A) is singular or too ill-conditioned to invert."""

    def __init__(self, message: str, date: str | None = None):
        super().__init__(message)
        self.date = date


class BandwidthError(NumericError, ValueError):
    pass


class QualityError(NumericError):
    pass


# -- configuration -----------------------------------------------------------

class ConfigError(TvmeffError, ValueError):
    exit_code = 4


class SpecError(ConfigError):
    pass
