"""Exception hierarchy shared by the parser, compiler and both query engines."""

from __future__ import annotations


class DatrError(Exception):
    """Base class for every error raised by this package."""


class TheoryError(DatrError):
    """A theory could not be read, parsed or compiled."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class IllegalCharacter(TheoryError):
    pass


class DatrSyntaxError(TheoryError):
    pass


class DuplicateLhs(TheoryError):
    def __init__(self, node: str, path: tuple[str, ...], line: int | None = None, column: int | None = None):
        self.node = node
        self.path = path
        shown = " ".join(path)
        super().__init__(f"duplicate definition of {node}:<{shown}>", line, column)


class EvaluablePathUnsupported(TheoryError):
    pass


class UnknownNode(DatrError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"node {node!r} is not defined in the theory")


class QueryFailure(DatrError):
    """Raised by forward evaluation when a query has no value."""


class Undefined(QueryFailure):
    def __init__(self, node: str, path: tuple[str, ...]):
        self.node = node
        self.path = path
        super().__init__(f"{node}:<{' '.join(path)}> is undefined")


class LimitExceeded(QueryFailure):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)
