"""Free (symbolic) models: values are terms over generators, kept in normal form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import GatError
from ..kernel import equal_upto_norm, infer_type, normalize
from ..scopes import Ident, fresh_tag
from ..syntax import GAT, AlgTerm, AlgType, App, NormalizationPolicy, TypeCtx, Var
from .base import CheckError, Model, fail


@dataclass(frozen=True)
class Symbolic:
    """A term of a free model; equality ignores the cached type."""

    term: AlgTerm
    type: AlgType = field(compare=False)

    def __repr__(self):
        return f"Symbolic({self.term!r})"


def show_symbolic(gat: GAT, v) -> str:
    if not isinstance(v, Symbolic):
        return repr(v)

    def go(t):
        if isinstance(t, Var):
            return t.id.name
        name = gat.display(t.head)
        return f"{name}({','.join(go(a) for a in t.args)})"

    return go(v.term)


def _generator_ctx(gat: GAT, generators) -> TypeCtx:
    if isinstance(generators, TypeCtx):
        return generators
    tag = fresh_tag()
    names: dict[str, Ident] = {}
    entries = []
    for i, gen in enumerate(generators, start=1):
        name, sort, *rest = gen
        args = rest[0] if rest else ()
        head = sort if isinstance(sort, Ident) else gat.resolve(sort, kind="type")
        targs = []
        for a in args:
            if isinstance(a, str):
                if a not in names:
                    raise GatError(f"generator {name} refers to undeclared generator {a}")
                targs.append(Var(names[a]))
            else:
                targs.append(a)
        entries.append((name, AlgType(head, tuple(targs))))
        names[name] = Ident(tag, i, name)
    return TypeCtx.build(tag, entries)


class FreeModel(Model):
    """The free model of ``gat`` on ``generators``.

    ``generators`` is a :class:`TypeCtx` or a list of ``(name, sort, args)``
    where ``args`` name earlier generators. Operations build terms and then
    normalize them with ``policy``; with ``strict`` every application is
    type-checked, including dependent type arguments.
    """

    def __init__(self, gat: GAT, generators, policy: NormalizationPolicy | None = None, *,
                 strict: bool = True, name: str | None = None, depth: int = 1):
        self.genctx = _generator_ctx(gat, generators)
        self.policy = gat.policy if policy is None else policy
        self.strict = strict
        types = {i: self._coercion(i) for i, _ in gat.typecons()}
        ops = {i: self._operation(i) for i, _ in gat.termcons()}
        super().__init__(gat, name or f"Free{gat.name.removeprefix('Th')}", types, ops,
                         show=lambda v: show_symbolic(gat, v))
        self.depth = depth
        self._universe = None
        self.enumerators = {i: self._enumerator(i) for i, _ in gat.typecons()}

    def generator(self, name: str) -> Symbolic:
        ident = self.genctx.lookup_name(name)
        if ident is None:
            raise GatError(f"no generator named {name}")
        return Symbolic(Var(ident), self.genctx.type_of(ident))

    def literal(self, ty: Ident, text: str) -> Symbolic:
        return self.generator(text.strip())

    def generators(self) -> list[Symbolic]:
        return [Symbolic(Var(i), t) for i, t in self.genctx]

    def _coercion(self, head: Ident):
        def coerce(v, *tyargs):
            if not isinstance(v, Symbolic):
                fail(f"expected a symbolic value, got {v!r}")
            if v.type.head != head:
                fail(f"expected sort {self.theory.display(head)}, got {self.theory.display(v.type.head)}")
            if self.strict:
                for got, want in zip(v.type.args, tyargs):
                    if normalize(got, self.policy) != normalize(want.term, self.policy):
                        fail("type arguments do not match")
            return v
        return coerce

    def _operation(self, op: Ident):
        def apply(*args):
            for a in args:
                if not isinstance(a, Symbolic):
                    fail(f"expected a symbolic value, got {a!r}")
            term = App(op, tuple(a.term for a in args))
            try:
                ty = infer_type(self.theory, self.genctx, term, strict=self.strict, policy=self.policy)
            except GatError as e:
                fail("domain and codomain do not match", e)
            return Symbolic(normalize(term, self.policy), ty)
        return apply

    def covers(self, axiom) -> bool:
        return equal_upto_norm(self.theory, axiom.localcontext, axiom.lhs, axiom.rhs, self.policy)

    def universe(self) -> list[Symbolic]:
        """Generators plus applications of depth up to ``self.depth``."""
        if self._universe is None:
            seen = {}
            for g in self.generators():
                seen.setdefault(g, g)
            for _ in range(self.depth):
                current = list(seen)
                for op, tc in self.theory.termcons():
                    for args in itertools.product(current, repeat=len(tc.args)):
                        try:
                            v = self.apply(op, list(args))
                        except (CheckError, GatError):
                            continue
                        seen.setdefault(v, v)
            self._universe = list(seen)
        return self._universe

    def _enumerator(self, head: Ident):
        def enum(*tyargs):
            return [v for v in self.universe() if v.type.head == head]
        return enum


def free_model(gat: GAT, generators, policy: NormalizationPolicy | None = None, *,
               strict: bool = True, name: str | None = None) -> FreeModel:
    return FreeModel(gat, generators, policy, strict=strict, name=name)
