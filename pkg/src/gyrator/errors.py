"""Exception taxonomy shared by the library and the command line tool.

Each class carries the process exit code the CLI reports when it escapes:
2 usage, 3 file format, 4 singular angle, 5 numerical failure.
"""


class GyratorError(Exception):
    exit_code = 5


class UsageError(GyratorError):
    """Caller asked for something the requested operation cannot do."""

    exit_code = 2


class RangeError(UsageError):
    """A parameter (order, payload index, mask radius, ...) is out of range."""


class ConfigurationError(UsageError):
    """Mismatched precomputed objects, e.g. a shell set built for another grid."""


class InsufficientDataError(UsageError):
    """Lossless inversion was requested from a truncated transform output."""


class WeakKeyError(UsageError):
    """Key material produces a degenerate keystream orbit."""


class DegenerateKeyError(UsageError):
    """Key parameters make the requested inverse ill defined (e.g. zero strength)."""


class ShapeError(GyratorError):
    """Field dimensions do not match what the operation requires."""

    exit_code = 3


class FormatError(GyratorError):
    """A file could not be parsed; ``byte_offset`` points at the problem."""

    exit_code = 3

    def __init__(self, message, byte_offset=None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class SingularAngleError(GyratorError):
    """The angle sits inside a method's singular band; route through dgt_auto."""

    exit_code = 4


class SingularParameterError(GyratorError):
    """A kernel coefficient is non-finite (cot/csc/tan evaluated at a pole)."""

    exit_code = 4


class ValidationError(GyratorError):
    """A constructed object violates its defining constraints."""

    exit_code = 5


class NumericalError(GyratorError):
    """An internal numerical routine failed to converge or lost precision."""

    exit_code = 5


class ConditioningError(NumericalError):
    """A division or solve was rejected because the operand is too small."""
