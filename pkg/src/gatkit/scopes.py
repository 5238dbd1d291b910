"""Hygienic identifiers.

Every piece of syntax that binds names is a :class:`Scope` carrying a unique
:class:`ScopeTag`. An :class:`Ident` points at a binding by ``(tag, index)``;
its ``name`` is only for display. Resolution by name happens once, at parse
time; afterwards all lookups go through tags, so substitution cannot capture.
"""

from __future__ import annotations

import dataclasses
import itertools
import threading
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

from .errors import (
    AmbiguousOverload,
    IndexOutOfRange,
    NonInjectiveMapping,
    TagNotFound,
    UnboundName,
)

_counter = itertools.count(1)
_lock = threading.Lock()
_MAX_TAG = 2**64 - 1


@dataclass(frozen=True, order=True)
class ScopeTag:
    raw: int

    def __hash__(self):
        return self.raw

    def __repr__(self):
        return f"#{self.raw}"


def fresh_tag() -> ScopeTag:
    with _lock:
        raw = next(_counter)
    if raw > _MAX_TAG:
        raise RuntimeError("scope tag counter exhausted")
    return ScopeTag(raw)


@dataclass(frozen=True)
class Ident:
    tag: ScopeTag
    index: int
    name: str = dataclasses.field(default="", compare=False)

    def __hash__(self):
        return hash((self.tag.raw, self.index))

    def __repr__(self):
        return f"{self.name}{self.tag!r}.{self.index}"

    def renamed(self, name: str) -> Ident:
        return Ident(self.tag, self.index, name)


@dataclass(frozen=True)
class Binding:
    """``arity`` distinguishes overloads of one name inside a scope; ``None``
    means "not applicable" (variables, axioms)."""

    name: str | None
    payload: Any = None
    arity: int | None = None


@dataclass(frozen=True)
class Scope:
    tag: ScopeTag
    bindings: tuple[Binding, ...] = ()

    def __post_init__(self):
        seen = set()
        for b in self.bindings:
            if b.name is None:
                continue
            key = (b.name, b.arity)
            if key in seen:
                from .errors import DuplicateName

                raise DuplicateName(f"{b.name!r} bound twice in one scope")
            seen.add(key)

    def __len__(self):
        return len(self.bindings)

    def __iter__(self):
        return iter(self.bindings)

    def ident(self, index: int) -> Ident:
        return Ident(self.tag, index, self.bindings[index - 1].name or "")

    def idents(self) -> list[Ident]:
        return [self.ident(i) for i in range(1, len(self.bindings) + 1)]

    def __getitem__(self, index: int) -> Binding:
        if not 1 <= index <= len(self.bindings):
            raise IndexOutOfRange(f"index {index} outside scope {self.tag!r} of length {len(self)}")
        return self.bindings[index - 1]

    def matches(self, name, arity=None, where=None) -> list[Ident]:
        out = []
        for i, b in enumerate(self.bindings, start=1):
            if b.name != name:
                continue
            if arity is not None and b.arity != arity:
                continue
            if where is not None and not where(b):
                continue
            out.append(Ident(self.tag, i, name))
        return out


@dataclass(frozen=True)
class ScopeList:
    scopes: tuple[Scope, ...] = ()

    def __post_init__(self):
        tags = [s.tag for s in self.scopes]
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate scope tag in scope list")

    def __iter__(self):
        return iter(self.scopes)

    def __len__(self):
        return len(self.scopes)

    def __add__(self, other: ScopeList) -> ScopeList:
        return ScopeList(self.scopes + tuple(other.scopes))

    def push(self, scope: Scope) -> ScopeList:
        return ScopeList(self.scopes + (scope,))

    def tags(self) -> list[ScopeTag]:
        return [s.tag for s in self.scopes]

    def scope(self, tag: ScopeTag) -> Scope:
        for s in self.scopes:
            if s.tag == tag:
                return s
        raise TagNotFound(f"no scope with tag {tag!r}")

    def has_tag(self, tag: ScopeTag) -> bool:
        return any(s.tag == tag for s in self.scopes)


def resolve(sl: ScopeList, name: str, arity: int | None = None, where=None) -> Ident:
    """Innermost binding of ``name``; with ``arity`` only matching overloads count."""
    for scope in reversed(sl.scopes):
        found = scope.matches(name, arity, where)
        if not found:
            continue
        if len(found) > 1:
            raise AmbiguousOverload(
                f"{name!r} has {len(found)} overloads in its innermost scope; give an arity"
            )
        return found[0]
    raise UnboundName(f"unbound name {name!r}")


def resolve_all(sl: ScopeList, name: str, arity: int | None = None, where=None) -> list[Ident]:
    """Every binding of ``name`` (innermost scope first)."""
    out = []
    for scope in reversed(sl.scopes):
        out.extend(scope.matches(name, arity, where))
    return out


def lookup(sl: ScopeList, ident: Ident) -> Binding:
    return sl.scope(ident.tag)[ident.index]


def map_idents(obj, on_ident: Callable[[Ident], Ident], on_tag: Callable[[ScopeTag], ScopeTag] | None = None):
    """Rebuild ``obj`` with every :class:`Ident` passed through ``on_ident`` and
    every bare :class:`ScopeTag` (scope headers) through ``on_tag``.

    Walks dataclasses, tuples, lists, frozensets and dicts (keys included).
    """
    if isinstance(obj, Ident):
        return on_ident(obj)
    if isinstance(obj, ScopeTag):
        return on_tag(obj) if on_tag is not None else obj
    if isinstance(obj, (str, int, float, bool, type(None))):
        return obj
    if isinstance(obj, tuple):
        return tuple(map_idents(x, on_ident, on_tag) for x in obj)
    if isinstance(obj, list):
        return [map_idents(x, on_ident, on_tag) for x in obj]
    if isinstance(obj, frozenset):
        return frozenset(map_idents(x, on_ident, on_tag) for x in obj)
    if isinstance(obj, dict):
        return {map_idents(k, on_ident, on_tag): map_idents(v, on_ident, on_tag) for k, v in obj.items()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        changes = {
            f.name: map_idents(getattr(obj, f.name), on_ident, on_tag)
            for f in dataclasses.fields(obj)
            if f.init
        }
        return dataclasses.replace(obj, **changes)
    return obj


def iter_tags(obj) -> Iterable[ScopeTag]:
    """Tags in first-occurrence order of a deterministic walk."""
    seen: dict[ScopeTag, None] = {}

    def visit(o):
        if isinstance(o, Ident):
            seen.setdefault(o.tag)
        elif isinstance(o, ScopeTag):
            seen.setdefault(o)
        elif isinstance(o, (str, int, float, bool, type(None))):
            return
        elif isinstance(o, (tuple, list)):
            for x in o:
                visit(x)
        elif isinstance(o, frozenset):
            for x in sorted(o, key=repr):
                visit(x)
        elif isinstance(o, dict):
            for k, v in o.items():
                visit(k)
                visit(v)
        elif dataclasses.is_dataclass(o) and not isinstance(o, type):
            for f in dataclasses.fields(o):
                visit(getattr(o, f.name))

    visit(obj)
    return list(seen)


def retag(obj, mapping: Mapping[ScopeTag, ScopeTag]):
    """Replace tags per ``mapping`` (tags not in it are left alone).

    ``obj`` is typically a :class:`ScopeList`, but anything made of
    dataclasses works.
    """
    present = iter_tags(obj)
    images = [mapping.get(t, t) for t in present]
    if len(set(images)) != len(images):
        raise NonInjectiveMapping("retag mapping identifies two scopes of the same object")

    def on_tag(t):
        return mapping.get(t, t)

    def on_ident(i):
        return Ident(mapping.get(i.tag, i.tag), i.index, i.name)

    return map_idents(obj, on_ident, on_tag)


def canonical_tags(obj) -> dict[ScopeTag, ScopeTag]:
    """Mapping onto sequential tags ``#1..#n`` in first-occurrence order."""
    return {t: ScopeTag(i) for i, t in enumerate(iter_tags(obj), start=1)}
