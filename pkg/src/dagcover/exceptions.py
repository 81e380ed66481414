"""Exception hierarchy shared across the package."""


class DagCoverError(Exception):
    """Base class for all package errors."""


class InputError(DagCoverError, ValueError):
    """Invalid argument or malformed graph data."""


class StructuralError(DagCoverError, ValueError):
    """A structure (decomposition, dag, embedding, cover) violates its contract."""


class PreconditionError(DagCoverError, ValueError):
    """An operation was called on inputs that do not satisfy its precondition."""


class ParseError(InputError):
    """A file could not be parsed.

    Carries the source name and 1-based line number for diagnostics.
    """

    def __init__(self, message, source="<string>", line=None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
