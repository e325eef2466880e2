"""Exception hierarchy shared by the simulator and the command line.

Every class carries a stable ``code`` string and a distinct ``exit_code`` so
that the CLI can report failures in a machine-readable way.
"""


class BicError(Exception):
    code = "E_INTERNAL"
    exit_code = 1


class DimensionError(BicError, ValueError):
    """Mismatched or empty record/key geometry."""

    code = "E_DIMENSION"
    exit_code = 3


class BoundsError(BicError, IndexError):
    code = "E_BOUNDS"
    exit_code = 4


class StateError(BicError, RuntimeError):
    """An operation was issued to a unit in the wrong state."""

    code = "E_STATE"
    exit_code = 5


class BufferOverflowError(StateError):
    code = "E_OVERFLOW"
    exit_code = 6


class ConfigError(BicError, ValueError):
    code = "E_CONFIG"
    exit_code = 7


class RangeError(BicError, ValueError):
    """Electrical parameter outside the characterized range."""

    code = "E_RANGE"
    exit_code = 8


class TraceError(BicError, ValueError):
    code = "E_TRACE"
    exit_code = 9


class FormatError(BicError, ValueError):
    """Malformed batch or index file."""

    code = "E_FORMAT"
    exit_code = 10


class QuerySyntaxError(BicError, ValueError):
    code = "E_SYNTAX"
    exit_code = 11

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAttributeError(BicError, KeyError):
    code = "E_ATTRIBUTE"
    exit_code = 12

    def __init__(self, name, position, m):
        super().__init__(f"unknown attribute {name!r} at position {position} (index has {m} attributes)")
        self.name = name
        self.position = position

    def __str__(self):
        return self.args[0]


class VerificationError(BicError, AssertionError):
    """Simulator output disagreed with the reference index."""

    code = "E_VERIFY"
    exit_code = 13


IO_EXIT_CODE = 14
USAGE_EXIT_CODE = 2
