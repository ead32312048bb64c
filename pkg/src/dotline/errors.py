"""Exception hierarchy shared by every dotline module."""

from __future__ import annotations


class DotlineError(Exception):
    """Base class for all errors raised by dotline."""


# -- core -------------------------------------------------------------------


class UnknownElement(DotlineError, LookupError):
    def __init__(self, element_id: str, kind: str = "element") -> None:
        super().__init__(f"unknown {kind} {element_id!r}")
        self.element_id = element_id


class UnknownVertex(UnknownElement):
    def __init__(self, vertex_id: str) -> None:
        super().__init__(vertex_id, "vertex")


class UnknownEdge(UnknownElement):
    def __init__(self, edge_id: str) -> None:
        super().__init__(edge_id, "edge")


class EmptyLabel(DotlineError, ValueError):
    pass


class InvalidPropertyValue(DotlineError, TypeError):
    pass


class ReservedKey(DotlineError, ValueError):
    pass


class DuplicateId(DotlineError, ValueError):
    def __init__(self, element_id: str, kind: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate {kind} id {element_id!r}{where}")
        self.element_id = element_id
        self.line = line


# -- views ------------------------------------------------------------------


class MissingWeight(DotlineError, KeyError):
    def __init__(self, edge_id: str, key: str) -> None:
        super().__init__(f"edge {edge_id!r} has no {key!r} property")
        self.edge_id = edge_id

    def __str__(self) -> str:
        return str(self.args[0])


class EmptyMemberSet(DotlineError, ValueError):
    pass


class NotAHyperedge(DotlineError, ValueError):
    pass


# -- index ------------------------------------------------------------------


class KeyIsReserved(ReservedKey):
    pass


class TypeMismatch(DotlineError, TypeError):
    pass


class MissingKey(DotlineError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


class NoSuchIndex(DotlineError, LookupError):
    pass


# -- pathlang ---------------------------------------------------------------


class PathSyntaxError(DotlineError, ValueError):
    """Malformed expression text; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()) -> None:
        detail = message
        if expected:
            detail += "; expected one of: " + ", ".join(sorted(expected))
        super().__init__(f"SyntaxError at offset {offset}: {detail}")
        self.offset = offset
        self.expected = expected


class StepTypeError(DotlineError, TypeError):
    """A step that cannot follow the element type produced by the previous step."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"TypeError at offset {offset}: {message}")
        self.offset = offset


class UnboundVariable(DotlineError, NameError):
    pass


class UnknownRoot(UnknownVertex):
    pass


# -- derive -----------------------------------------------------------------


class ExpressionEndsOnEdge(DotlineError, ValueError):
    pass


class LabelCollision(DotlineError, ValueError):
    pass


# -- graph files ------------------------------------------------------------


class ParseError(DotlineError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class DanglingEdge(DotlineError, ValueError):
    def __init__(self, edge_id: str, vertex_id: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"edge {edge_id!r} references missing vertex {vertex_id!r}{where}")
        self.edge_id = edge_id
        self.vertex_id = vertex_id
        self.line = line
