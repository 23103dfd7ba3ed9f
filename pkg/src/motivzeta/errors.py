"""Exception hierarchy shared by every engine module.

Domain errors derive from `MotivZetaError`; the CLI maps them to exit code 1.
Input-language errors (`ParseError`, `UsageError`, `SchemaError`) map to 2.
"""


class MotivZetaError(Exception):
    """Base class for every error raised by the engine."""


class DivisionByZero(MotivZetaError, ZeroDivisionError):
    pass


class UnsupportedExpansion(MotivZetaError):
    pass


class UnknownClassValue(MotivZetaError):
    """A realization was requested outside the supported catalog."""


class DegenerateInput(MotivZetaError):
    pass


class NotInSrForm(MotivZetaError):
    pass


class TruncationMismatch(MotivZetaError):
    pass


class InvalidGerm(MotivZetaError):
    pass


class UnsupportedDimension(MotivZetaError):
    pass


class OracleUndefined(MotivZetaError):
    """The zeta oracle cannot answer this query (coefficient not of the required shape)."""


class InconsistentOracle(MotivZetaError):
    pass


class ValidationFailure(MotivZetaError):
    pass


class InputError(MotivZetaError):
    """Errors in user-supplied text or files."""


class ParseError(InputError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class SchemaError(InputError):
    pass


class UsageError(InputError):
    pass
