"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live on sets of different cardinality."""


class DomainError(ValueError):
    """An argument is outside the domain of the operation."""


class ResourceGuardError(RuntimeError):
    """The requested size exceeds a documented computational limit."""

    def __init__(self, message, limit=None):
        super().__init__(message)
        self.limit = limit


class FamilyInvariantError(ValueError):
    """A multiplicative family violates g_0 = 1 or g_x g_y = g_(x v y)."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InconsistencyError(RuntimeError):
    """An internal consistency check failed.

    Raised only when a computed structure contradicts a proven property, so
    seeing one means either a bug or a counterexample worth reporting.
    """


class RelationParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
