"""Name → theory/map/model table populated in declaration order."""

from __future__ import annotations

from typing import Any, Iterator

from ..errors import DuplicateName, UnknownName, UnknownTheory


class Registry:
    """Insertion-ordered, unique names. Not synchronized; share read-only."""

    def __init__(self):
        self._entries: dict[str, tuple[str, Any]] = {}
        self.sources: dict[str, str] = {}
        self.expected_invalid: set[str] = set()

    def add(self, name: str, entity, kind: str | None = None, source: str | None = None) -> None:
        if name in self._entries:
            raise DuplicateName(f"{name} is already registered")
        self._entries[name] = (kind or _kind_of(entity), entity)
        if source is not None:
            self.sources[name] = source

    def replace(self, name: str, entity, kind: str | None = None) -> None:
        self._entries[name] = (kind or _kind_of(entity), entity)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def get(self, name: str):
        try:
            return self._entries[name][1]
        except KeyError:
            raise UnknownName(f"nothing named {name!r} is registered") from None

    def kind(self, name: str) -> str:
        return self._entries[name][0]

    def names(self, kind: str | None = None) -> list[str]:
        return [n for n, (k, _) in self._entries.items() if kind is None or k == kind]

    def items(self, kind: str | None = None):
        return [(n, e) for n, (k, e) in self._entries.items() if kind is None or k == kind]

    def theory(self, name: str, span=None):
        entry = self._entries.get(name)
        if entry is None or entry[0] != "theory":
            raise UnknownTheory(f"no theory named {name!r}", span=span)
        return entry[1]

    def map(self, name: str, span=None):
        entry = self._entries.get(name)
        if entry is None or entry[0] != "map":
            raise UnknownName(f"no map named {name!r}", span=span)
        return entry[1]

    def model(self, name: str):
        entry = self._entries.get(name)
        if entry is None or entry[0] != "model":
            raise UnknownName(f"no model named {name!r}")
        return entry[1]

    def copy(self) -> Registry:
        r = Registry()
        r._entries = dict(self._entries)
        r.sources = dict(self.sources)
        r.expected_invalid = set(self.expected_invalid)
        return r


def _kind_of(entity) -> str:
    from ..syntax import GAT

    if isinstance(entity, GAT):
        return "theory"
    from ..morphisms import GeneralMap, IdMap, InclMap, SimpleMap

    if isinstance(entity, (IdMap, InclMap, SimpleMap, GeneralMap)):
        return "map"
    return "model"
