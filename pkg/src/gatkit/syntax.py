"""Terms, types, contexts, judgments and theories."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from .errors import TagNotFound, UnboundVariable, UnknownConstructor
from .scopes import Binding, Ident, Scope, ScopeList, ScopeTag, fresh_tag, resolve, resolve_all


@dataclass(frozen=True)
class Var:
    id: Ident

    def __repr__(self):
        return repr(self.id)


@dataclass(frozen=True)
class App:
    head: Ident
    args: tuple[AlgTerm, ...] = ()

    def __repr__(self):
        return f"{self.head.name}({', '.join(map(repr, self.args))})"


AlgTerm = Union[Var, App]


@dataclass(frozen=True)
class AlgType:
    head: Ident
    args: tuple[AlgTerm, ...] = ()

    def __repr__(self):
        if not self.args:
            return self.head.name
        return f"{self.head.name}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class AlgSort:
    head: Ident

    def __repr__(self):
        return self.head.name


def free_vars(t) -> list[Ident]:
    """Variables of a term or type, in first-occurrence order."""
    out: dict[Ident, None] = {}

    def go(x):
        if isinstance(x, Var):
            out.setdefault(x.id)
        else:
            for a in x.args:
                go(a)

    go(t)
    return list(out)


@dataclass(frozen=True)
class TypeCtx:
    """An ordered context; binding payloads are :class:`AlgType` values."""

    scope: Scope

    @staticmethod
    def empty() -> TypeCtx:
        return TypeCtx(Scope(fresh_tag(), ()))

    @staticmethod
    def build(tag: ScopeTag, entries) -> TypeCtx:
        """``entries`` is a sequence of ``(name, AlgType)``; types may refer to
        earlier entries through ``Ident(tag, i)``."""
        return TypeCtx(Scope(tag, tuple(Binding(n, ty) for n, ty in entries)))

    @property
    def tag(self) -> ScopeTag:
        return self.scope.tag

    def __len__(self):
        return len(self.scope)

    def __iter__(self) -> Iterator[tuple[Ident, AlgType]]:
        for i, b in enumerate(self.scope.bindings, start=1):
            yield Ident(self.tag, i, b.name), b.payload

    def idents(self) -> list[Ident]:
        return self.scope.idents()

    def ident(self, index: int) -> Ident:
        return self.scope.ident(index)

    def names(self) -> list[str]:
        return [b.name for b in self.scope.bindings]

    def types(self) -> list[AlgType]:
        return [b.payload for b in self.scope.bindings]

    def owns(self, ident: Ident) -> bool:
        return ident.tag == self.tag and 1 <= ident.index <= len(self)

    def type_of(self, ident: Ident) -> AlgType:
        if not self.owns(ident):
            raise UnboundVariable(f"variable {ident.name or ident!r} is not bound in this context")
        return self.scope.bindings[ident.index - 1].payload

    def lookup_name(self, name: str) -> Ident | None:
        for i, b in enumerate(self.scope.bindings, start=1):
            if b.name == name:
                return Ident(self.tag, i, name)
        return None


@dataclass(frozen=True)
class TypeConstructor:
    name: str
    localcontext: TypeCtx
    args: tuple[Ident, ...] = ()


@dataclass(frozen=True)
class TermConstructor:
    name: str
    localcontext: TypeCtx
    args: tuple[Ident, ...]
    type: AlgType


@dataclass(frozen=True)
class Axiom:
    name: str | None
    localcontext: TypeCtx
    sort: AlgSort
    lhs: AlgTerm
    rhs: AlgTerm


Judgment = Union[TypeConstructor, TermConstructor, Axiom]
Constructor = Union[TypeConstructor, TermConstructor]


def judgment_binding(j: Judgment) -> Binding:
    if isinstance(j, Axiom):
        return Binding(j.name, j, None)
    return Binding(j.name, j, len(j.args))


def is_constructor(b: Binding) -> bool:
    return isinstance(b.payload, (TypeConstructor, TermConstructor))


def is_termcon(b: Binding) -> bool:
    return isinstance(b.payload, TermConstructor)


def is_typecon(b: Binding) -> bool:
    return isinstance(b.payload, TypeConstructor)


@dataclass(frozen=True)
class NormalizationPolicy:
    """Declared rewrite hooks: associative operations and their units."""

    assoc: frozenset[Ident] = frozenset()
    units: tuple[tuple[Ident, Ident], ...] = ()

    def unit_of(self, op: Ident) -> Ident | None:
        for o, u in self.units:
            if o == op:
                return u
        return None

    def __bool__(self):
        return bool(self.assoc or self.units)

    def merge(self, other: NormalizationPolicy) -> NormalizationPolicy:
        units = dict(self.units)
        for o, u in other.units:
            units.setdefault(o, u)
        return NormalizationPolicy(self.assoc | other.assoc, tuple(units.items()))


@dataclass(frozen=True)
class GAT:
    name: str
    segments: ScopeList = field(default_factory=ScopeList)
    aliases: tuple[tuple[str, str], ...] = ()
    policy: NormalizationPolicy = field(default_factory=NormalizationPolicy)

    @cached_property
    def _index(self) -> dict[Ident, Judgment]:
        out = {}
        for seg in self.segments:
            for i, b in enumerate(seg.bindings, start=1):
                out[Ident(seg.tag, i, b.name or "")] = b.payload
        return out

    def judgments(self) -> list[tuple[Ident, Judgment]]:
        return [(Ident(k.tag, k.index, v.name or ""), v) for k, v in self._index.items()]

    def typecons(self) -> list[tuple[Ident, TypeConstructor]]:
        return [(k, v) for k, v in self.judgments() if isinstance(v, TypeConstructor)]

    def termcons(self) -> list[tuple[Ident, TermConstructor]]:
        return [(k, v) for k, v in self.judgments() if isinstance(v, TermConstructor)]

    def constructors(self) -> list[tuple[Ident, Constructor]]:
        return [(k, v) for k, v in self.judgments() if not isinstance(v, Axiom)]

    def axioms(self) -> list[tuple[Ident, Axiom]]:
        return [(k, v) for k, v in self.judgments() if isinstance(v, Axiom)]

    def __contains__(self, ident) -> bool:
        return isinstance(ident, Ident) and ident in self._index

    def judgment(self, ident: Ident) -> Judgment:
        try:
            return self._index[ident]
        except KeyError:
            if not self.segments.has_tag(ident.tag):
                raise TagNotFound(f"{ident.name or ident!r} does not belong to theory {self.name}") from None
            raise UnknownConstructor(f"{ident!r} out of range in theory {self.name}") from None

    def typecon(self, ident: Ident) -> TypeConstructor:
        j = self._index.get(ident)
        if not isinstance(j, TypeConstructor):
            raise UnknownConstructor(f"{ident.name or ident!r} is not a type constructor of {self.name}")
        return j

    def termcon(self, ident: Ident) -> TermConstructor:
        j = self._index.get(ident)
        if not isinstance(j, TermConstructor):
            raise UnknownConstructor(f"{ident.name or ident!r} is not a term constructor of {self.name}")
        return j

    def display(self, ident: Ident) -> str:
        j = self._index.get(ident)
        if j is not None and j.name is not None:
            return j.name
        return ident.name

    def resolve(self, name: str, arity: int | None = None, *, kind: str = "any") -> Ident:
        name = self.alias_target(name) or name
        return resolve(self.segments, name, arity, where=_KIND_FILTERS[kind])

    def resolve_all(self, name: str, arity: int | None = None, *, kind: str = "any") -> list[Ident]:
        name = self.alias_target(name) or name
        return resolve_all(self.segments, name, arity, where=_KIND_FILTERS[kind])

    def alias_target(self, symbol: str) -> str | None:
        for s, n in reversed(self.aliases):
            if s == symbol:
                return n
        return None

    def alias_for(self, name: str) -> str | None:
        for s, n in self.aliases:
            if n == name:
                return s
        return None

    def tags(self) -> list[ScopeTag]:
        return self.segments.tags()

    def position(self, ident: Ident) -> int:
        """Flattened position of a judgment (segmentation-insensitive key)."""
        return self._positions[ident]

    @cached_property
    def _positions(self) -> dict[Ident, int]:
        return {k: i for i, k in enumerate(self._index)}

    def __repr__(self):
        return f"GAT({self.name})"


_KIND_FILTERS = {
    "any": is_constructor,
    "type": is_typecon,
    "term": is_termcon,
    "judgment": None,
}


@dataclass(frozen=True)
class TermInCtx:
    ctx: TypeCtx
    term: AlgTerm


@dataclass(frozen=True)
class TypeInCtx:
    ctx: TypeCtx
    type: AlgType
