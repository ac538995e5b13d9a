"""Exception hierarchy.

Every error raised on purpose by the toolkit derives from :class:`DomcheckError`,
so callers (and the CLI) can separate input problems from bugs.
"""


class DomcheckError(Exception):
    """Base class for all toolkit errors."""


class NotHermitian(DomcheckError, ValueError):
    pass


class NotPSD(DomcheckError, ValueError):
    pass


class NoConvergence(DomcheckError, ArithmeticError):
    pass


class DimensionMismatch(DomcheckError, ValueError):
    pass


class NotSubmajorized(DomcheckError, ValueError):
    pass


class BadGauge(DomcheckError, ValueError):
    pass


class BadPartition(DomcheckError, ValueError):
    pass


class NotMember(DomcheckError, ValueError):
    pass


class BadRange(DomcheckError, ValueError):
    pass


class InsufficientSpectrum(DomcheckError, ValueError):
    pass


class NotCP(DomcheckError, ValueError):
    pass


class NotHermiticityPreserving(DomcheckError, ValueError):
    pass


class BadK(DomcheckError, ValueError):
    pass


class BadThreshold(DomcheckError, ValueError):
    pass


class InfeasibleParameters(DomcheckError, ValueError):
    pass


class WitnessFailed(DomcheckError, ArithmeticError):
    pass


class UnknownId(DomcheckError, KeyError):
    def __str__(self):  # KeyError repr-quotes its message otherwise
        return str(self.args[0]) if self.args else "unknown id"


class ParseError(DomcheckError, ValueError):
    """Malformed document text; carries the line and column of the failure."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        msg = self.args[0]
        if self.line is not None:
            return f"{msg} (line {self.line}, column {self.column})"
        return msg


class SchemaError(DomcheckError, ValueError):
    """Well-formed document violating its schema; ``field`` names the culprit."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
