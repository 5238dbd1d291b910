"""Exception hierarchy shared by every gatkit layer."""

from __future__ import annotations


class GatError(Exception):
    """Base class. ``span`` is an optional ``(line, column)`` into DSL source."""

    def __init__(self, message: str, *, span: tuple[int, int] | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def with_span(self, span):
        if self.span is None and span is not None:
            self.span = span
        return self

    def __str__(self):
        kind = type(self).__name__
        if self.span is not None:
            line, col = self.span
            return f"{kind} at {line}:{col}: {self.message}"
        return f"{kind}: {self.message}"


# scopes
class UnboundName(GatError):
    pass


class AmbiguousOverload(GatError):
    pass


class TagNotFound(GatError):
    pass


class IndexOutOfRange(GatError):
    pass


class NonInjectiveMapping(GatError):
    pass


# kernel
class UnboundVariable(GatError):
    pass


class UnknownConstructor(GatError):
    pass


class ArityMismatch(GatError):
    pass


class SortMismatch(GatError):
    pass


class ImplicitArgUnderdetermined(GatError):
    pass


class ForwardReference(GatError):
    def __init__(self, message, *, position=None, span=None):
        super().__init__(message, span=span)
        self.position = position


class MissingAssignment(GatError):
    pass


class DuplicateName(GatError):
    pass


# surface
class GatSyntaxError(GatError):
    pass


class UnknownParent(GatError):
    pass


class UnknownTheory(GatError):
    pass


class ConflictingDeclaration(GatError):
    pass


class MalformedDocument(GatError):
    def __init__(self, message, *, path=()):
        where = "/".join(str(p) for p in path) or "<root>"
        super().__init__(f"{message} (at {where})")
        self.path = tuple(path)


# morphisms
class MissingImage(GatError):
    pass


class TheoryMismatch(GatError):
    pass


class ErasureViolation(GatError):
    pass


# colimits
class NotAnInclusion(GatError):
    pass


class NameCollision(GatError):
    pass


class UnknownName(GatError):
    pass


class IncompatibleIdentification(GatError):
    pass
