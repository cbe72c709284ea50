"""Exception hierarchy.

Every error carries a short ``category`` string; the CLI prints it as the
machine-parseable part of its one-line error message.
"""


class LeximaxError(Exception):
    category = "error"


class ValidationError(LeximaxError, ValueError):
    category = "invalid"


class DimensionError(ValidationError):
    category = "dimension"


class RangeError(ValidationError):
    category = "range"


class DuplicateIdError(ValidationError):
    category = "duplicate"


class CardinalityError(ValidationError):
    category = "k-range"


class DocumentError(ValidationError):
    """Malformed document: bad syntax or a missing / mistyped field."""

    category = "syntax"


class SchemaError(DocumentError):
    category = "schema"


class SizeLimitError(LeximaxError, ValueError):
    category = "limit"


class MalformedProblemError(LeximaxError, ValueError):
    category = "malformed"


class NumericalError(LeximaxError, ArithmeticError):
    """The simplex hit a pivot too small to trust."""

    category = "numerical"

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({extra})"


class InfeasibleStageError(LeximaxError, RuntimeError):
    category = "infeasible"

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
