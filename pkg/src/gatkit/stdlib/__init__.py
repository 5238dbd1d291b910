"""The bundled library: reference theories, maps and model bindings."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Mapping

from ..errors import GatError
from ..kernel import check_theory
from ..models import check_axioms, free_model
from ..models.base import Model
from ..models.builtin import (
    fin_set_c,
    fin_set_fib,
    int_plus_monoid,
    modular_plus_monoid,
    nat_arith_native,
    slice_c,
    string_monoid,
    times_int_monoid,
)
from ..morphisms import SimpleMap, check_simple_validity, check_welltyped
from ..surface.elaborate import load_source
from ..surface.registry import Registry

SOURCES = ("basics.gat", "monoids.gat", "arith.gat", "categories.gat", "rings.gat", "maps.gat", "invalid.gat")
EXPECTED_INVALID = frozenset({"Bad₁", "Bad₂"})


class LibraryError(GatError):
    pass


@dataclass(frozen=True)
class IndexEntry:
    name: str
    kind: str
    source: str


@dataclass
class LibraryIndex:
    entries: list[IndexEntry] = field(default_factory=list)

    def add(self, name: str, kind: str, source: str) -> None:
        if any(e.name == name for e in self.entries):
            raise LibraryError(f"{name} is listed twice")
        self.entries.append(IndexEntry(name, kind, source))

    def names(self, kind: str | None = None) -> list[str]:
        return [e.name for e in self.entries if kind is None or e.kind == kind]


@dataclass(frozen=True)
class ModelSpec:
    """A named model binding; ``build`` instantiates it against a registry."""

    name: str
    theory: str
    factory: Callable[..., Model]
    params: Mapping[str, Any] = field(default_factory=dict)
    doc: str = ""

    def build(self, reg: Registry, **params) -> Model:
        unknown = set(params) - set(self.params)
        if unknown:
            raise LibraryError(f"{self.name} has no parameter(s) {', '.join(sorted(unknown))}")
        values = dict(self.params)
        for k, v in params.items():
            values[k] = _convert(self.params[k], v, k)
        return self.factory(reg, **values)


def _convert(default, value, key):
    if isinstance(value, str) and isinstance(default, int) and not isinstance(default, bool):
        try:
            return int(value)
        except ValueError:
            raise LibraryError(f"parameter {key} expects an integer, got {value!r}") from None
    return value


def _free_category(reg: Registry) -> Model:
    th = reg.theory("ThCategory")
    gens = [("A", "Ob", []), ("B", "Ob", []), ("f", "Hom", ["A", "B"]), ("g", "Hom", ["B", "A"])]
    return free_model(th, gens, th.policy, strict=True, name="FreeCategory")


def _slice(reg: Registry, over=2, max_size=3) -> Model:
    return slice_c(fin_set_c(reg.theory("ThCategory"), max_size), over)


MODELS = (
    ModelSpec("IntPlusMonoid", "ThMonoid", lambda r: int_plus_monoid(r.theory("ThMonoid")),
              doc="integers under addition"),
    ModelSpec("TimesIntMonoid", "ThMonoid", lambda r: times_int_monoid(r.theory("ThMonoid")),
              doc="integers under multiplication"),
    ModelSpec("StringMonoid", "ThMonoid", lambda r: string_monoid(r.theory("ThMonoid")),
              doc="text under concatenation"),
    ModelSpec("ModularPlusMonoid", "ThMonoid", lambda r, n: modular_plus_monoid(r.theory("ThMonoid"), n),
              {"n": 7}, doc="integers mod n under addition"),
    ModelSpec("NatArithNative", "ThArith", lambda r: nat_arith_native(r.theory("ThArith")),
              doc="natural numbers with native + and *"),
    ModelSpec("FinSetC", "ThCategory", lambda r, max_size: fin_set_c(r.theory("ThCategory"), max_size),
              {"max_size": 3}, doc="finite sets, indexed style"),
    ModelSpec("FinSetFib", "ThCategory", lambda r, max_size: fin_set_fib(r.theory("ThCategory"), max_size),
              {"max_size": 3}, doc="finite sets, fibered style"),
    ModelSpec("SliceC", "ThCategory", _slice, {"over": 2, "max_size": 3},
              doc="slice of FinSetC over an object"),
    ModelSpec("FreeCategory", "ThCategory", _free_category,
              doc="free category on A, B, f: A→B, g: B→A"),
)


def source_text(name: str) -> str:
    return resources.files(__package__).joinpath("gat", name).read_text(encoding="utf-8")


def _check_entry(reg: Registry, name: str, entity) -> None:
    kind = reg.kind(name)
    if kind == "theory":
        errors = check_theory(entity)
        if errors:
            raise LibraryError(f"{name}: {errors[0]}")
    elif kind == "map":
        diags = check_welltyped(entity)
        if name in reg.expected_invalid:
            return
        if diags:
            raise LibraryError(f"{name}: {diags[0]}")
        if isinstance(entity, SimpleMap):
            bad = check_simple_validity(entity)
            if bad:
                raise LibraryError(f"{name}: {bad[0]}")


def load_files(reg: Registry, paths, index: LibraryIndex | None = None, *, check: bool = True) -> None:
    """Load ``.gat`` files into ``reg`` in order."""
    for path in paths:
        path = Path(path)
        for name, entity in load_source(path.read_text(encoding="utf-8"), reg, str(path)):
            if index is not None:
                index.add(name, reg.kind(name), str(path))
            if check:
                _check_entry(reg, name, entity)


def library_path() -> list[Path]:
    """Extra library directories named by ``GATKIT_PATH``."""
    raw = os.environ.get("GATKIT_PATH", "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


def _build(check_models: bool) -> tuple[Registry, LibraryIndex]:
    reg = Registry()
    reg.expected_invalid = set(EXPECTED_INVALID)
    index = LibraryIndex()
    for src in SOURCES:
        try:
            decls = load_source(source_text(src), reg, src)
        except GatError as e:
            raise LibraryError(f"{src}: {e}") from e
        for name, entity in decls:
            index.add(name, reg.kind(name), src)
            _check_entry(reg, name, entity)
    for name in EXPECTED_INVALID:
        if name == "Bad₂" and not check_welltyped(reg.map(name)):
            raise LibraryError(f"{name}: expected to be ill-typed")
    for spec in MODELS:
        reg.add(spec.name, spec, "model", "builtin")
        index.add(spec.name, "model", "builtin")
        if check_models:
            try:
                model = spec.build(reg)
            except GatError as e:
                raise LibraryError(f"{spec.name}: {e}") from e
            report = check_axioms(model)
            if report.counterexamples:
                raise LibraryError(f"{spec.name}: {report.counterexamples[0]}")
    return reg, index


_CACHE: dict[bool, tuple[Registry, LibraryIndex]] = {}


def load_library(check_models: bool = True) -> tuple[Registry, LibraryIndex]:
    """The registry and index; built once, copied on each call."""
    if check_models not in _CACHE:
        _CACHE[check_models] = _build(check_models)
    reg, index = _CACHE[check_models]
    return reg.copy(), LibraryIndex(list(index.entries))


def load_stdlib() -> Registry:
    return load_library()[0]


def build_model(reg: Registry, name: str, **params) -> Model:
    return reg.model(name).build(reg, **params)


__all__ = [
    "EXPECTED_INVALID", "IndexEntry", "LibraryError", "LibraryIndex", "MODELS", "ModelSpec",
    "build_model", "library_path", "load_files", "load_library", "load_stdlib", "source_text",
]
