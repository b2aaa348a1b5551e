"""Shared exception types.

The library distinguishes three failure families:

* ``SchemaError`` -- a scenario document does not validate.
* ``PrecisionError`` -- a result would depend on coefficients beyond the
  tracked truncation order.  Nothing is ever guessed past a truncation;
  callers either supply more precision or treat the value as unknown.
* ``ComputationError`` -- a well-posed computation rejected its input
  (wrong reduction type, malformed matrix, enumeration bound, ...).
"""


class MonodromyLabError(Exception):
    """Base class for all library errors."""


class SchemaError(MonodromyLabError):
    """A scenario document failed validation."""


class PrecisionError(MonodromyLabError):
    """The requested answer is not determined at the available precision."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class ComputationError(MonodromyLabError):
    """A domain-level computation rejected its input."""


class GenericSupersingularError(ComputationError):
    """The multiplication-by-p series has no determinable linear u-term."""


class NotHeightTwoError(ComputationError):
    """The special fibre is not height 2 (e.g. good ordinary reduction)."""


class LadderMismatchError(ComputationError):
    """Oracle root valuations disagree with a valuation ladder."""

    def __init__(self, level, expected, actual):
        super().__init__(
            "level %d valuation mismatch: ladder %s vs oracle %s"
            % (level, expected, actual)
        )
        self.level = level
        self.expected = expected
        self.actual = actual
