"""Incremental construction of theories, one segment at a time."""

from __future__ import annotations

from .errors import DuplicateName, UnknownName
from .kernel import check_judgment
from .scopes import Binding, Ident, Scope, ScopeList, fresh_tag, resolve, resolve_all
from .syntax import (
    GAT,
    AlgSort,
    AlgTerm,
    AlgType,
    Axiom,
    NormalizationPolicy,
    TermConstructor,
    TypeConstructor,
    TypeCtx,
    judgment_binding,
)
from .syntax import _KIND_FILTERS


class TheoryBuilder:
    """Appends judgments to a fresh segment on top of ``parent``.

    Every judgment is checked against everything before it as it is added.
    Not thread-safe; build once, then share the resulting :class:`GAT`.
    """

    def __init__(self, name: str, parent: GAT | None = None):
        self.name = name
        self.parent = parent or GAT(name)
        self.tag = fresh_tag()
        self.bindings: list[Binding] = []
        self.aliases = list(self.parent.aliases)
        self.policy = self.parent.policy
        self.strict = False

    # -- views -------------------------------------------------------------
    def segments(self) -> ScopeList:
        if not self.bindings:
            return self.parent.segments
        return self.parent.segments.push(Scope(self.tag, tuple(self.bindings)))

    def current(self) -> GAT:
        return GAT(self.name, self.segments(), tuple(self.aliases), self.policy)

    def next_ident(self, name: str) -> Ident:
        return Ident(self.tag, len(self.bindings) + 1, name)

    def resolve(self, name: str, arity: int | None = None, kind: str = "any") -> Ident:
        target = self.alias_target(name)
        return resolve(self.segments(), target, arity, where=_KIND_FILTERS[kind])

    def resolve_all(self, name: str, arity: int | None = None, kind: str = "any") -> list[Ident]:
        return resolve_all(self.segments(), self.alias_target(name), arity, where=_KIND_FILTERS[kind])

    def alias_target(self, name: str) -> str:
        for s, n in reversed(self.aliases):
            if s == name:
                return n
        return name

    # -- judgments ---------------------------------------------------------
    def _add(self, j) -> Ident:
        b = judgment_binding(j)
        if b.name is not None:
            for other in self.bindings:
                if other.name == b.name and other.arity == b.arity:
                    raise DuplicateName(f"{b.name!r} is already declared in theory {self.name}")
        ident = self.next_ident(j.name or "")
        self.bindings.append(b)
        try:
            check_judgment(self.current(), j, strict=self.strict)
        except Exception:
            self.bindings.pop()
            raise
        return ident

    def add_typecon(self, name: str, localcontext: TypeCtx | None = None, args=()) -> Ident:
        ctx = localcontext or TypeCtx.empty()
        return self._add(TypeConstructor(name, ctx, tuple(args)))

    def add_termcon(self, name: str, localcontext: TypeCtx, args, type_: AlgType) -> Ident:
        return self._add(TermConstructor(name, localcontext, tuple(args), type_))

    def add_axiom(self, name: str | None, localcontext: TypeCtx, lhs: AlgTerm, rhs: AlgTerm) -> Ident:
        from .kernel import infer_sort

        sort = infer_sort(self.current(), localcontext, lhs)
        return self._add(Axiom(name, localcontext, AlgSort(sort.head), lhs, rhs))

    def add_judgment(self, j) -> Ident:
        return self._add(j)

    def add_alias(self, symbol: str, name: str) -> None:
        try:
            self.resolve(name)
        except Exception:
            raise UnknownName(f"alias {symbol} refers to unknown constructor {name!r}") from None
        self.aliases.append((symbol, name))

    def add_policy(self, op: Ident, *, assoc: bool = False, unit: Ident | None = None) -> None:
        extra = NormalizationPolicy(
            frozenset([op]) if assoc else frozenset(),
            ((op, unit),) if unit is not None else (),
        )
        self.policy = self.policy.merge(extra)

    def build(self) -> GAT:
        return self.current()


def new_theory(name: str) -> TheoryBuilder:
    return TheoryBuilder(name)


def extend(parent: GAT, name: str | None = None) -> TheoryBuilder:
    return TheoryBuilder(name or parent.name, parent)
