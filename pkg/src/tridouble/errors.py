"""Exception hierarchy.

Every error raised on bad *input* derives from :class:`DomainError`; the CLI
maps those to exit code 1.
"""


class DomainError(ValueError):
    """Invalid input data (bad triangulation file, bad group table, ...)."""

    category = "domain"


class ParseError(DomainError):
    category = "syntax"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class IncompleteGluingError(DomainError):
    category = "incomplete"


class NonInvolutiveGluingError(DomainError):
    category = "non-involutive"


class SelfGluedFaceError(DomainError):
    category = "self-glued"


class DisconnectedError(DomainError):
    category = "disconnected"


class NotDualizableError(DomainError):
    category = "not-dualizable"

    def __init__(self, message, vertex=None):
        self.vertex = vertex
        super().__init__(message if vertex is None else f"vertex {vertex}: {message}")


class GroupTableError(DomainError):
    category = "group-table"


class ResourceLimitError(DomainError):
    category = "resource-limit"

    def __init__(self, message, stage=None):
        self.stage = stage
        super().__init__(message if stage is None else f"[{stage}] {message}")


class VerificationError(RuntimeError):
    """A pipeline self-check failed; this is a bug, not a user error."""
