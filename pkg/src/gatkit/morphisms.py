"""Theory maps: four representations, pushforward, composition, checks, migration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Union

from .errors import (
    ArityMismatch,
    ErasureViolation,
    GatError,
    MissingImage,
    SortMismatch,
    TheoryMismatch,
)
from .kernel import (
    alpha_equal,
    check_term,
    check_type,
    equal_upto_norm,
    generic_term,
    generic_type,
    infer_type,
    normalize,
    solve_args,
    subst,
)
from .scopes import Ident, fresh_tag
from .syntax import (
    GAT,
    AlgTerm,
    AlgType,
    App,
    TermConstructor,
    TermInCtx,
    TypeConstructor,
    TypeCtx,
    TypeInCtx,
    Var,
    free_vars,
)


@dataclass(frozen=True)
class IdMap:
    gat: GAT
    name: str = "id"

    @property
    def dom(self) -> GAT:
        return self.gat

    @property
    def codom(self) -> GAT:
        return self.gat


@dataclass(frozen=True)
class InclMap:
    dom: GAT
    codom: GAT
    name: str = "incl"


@dataclass(frozen=True)
class SimpleMap:
    dom: GAT
    codom: GAT
    typemap: Mapping[Ident, Ident]
    termmap: Mapping[Ident, Ident]
    name: str = "simple"


@dataclass(frozen=True)
class GeneralMap:
    dom: GAT
    codom: GAT
    typemap: Mapping[Ident, TypeInCtx]
    termmap: Mapping[Ident, TermInCtx]
    name: str = "map"
    spans: Mapping[Ident, tuple] = field(default_factory=dict, compare=False)


TheoryMap = Union[IdMap, InclMap, SimpleMap, GeneralMap]

KIND_NAMES = {IdMap: "IdMap", InclMap: "InclMap", SimpleMap: "SimpleMap", GeneralMap: "GeneralMap"}


def kind_name(m: TheoryMap) -> str:
    return KIND_NAMES[type(m)]


def image_ident(m: TheoryMap, c: Ident) -> Ident:
    """The constructor ``c`` is sent to, for maps that send idents to idents."""
    if isinstance(m, (IdMap, InclMap)):
        return c
    if isinstance(m, SimpleMap):
        table = m.typemap if c in m.typemap else m.termmap
        try:
            return table[c]
        except KeyError:
            raise MissingImage(f"{m.name} has no image for {c.name}") from None
    raise TypeError(f"{kind_name(m)} does not map constructors to constructors")


# ---------------------------------------------------------------------------
# pushforward

class _Pusher:
    """Pushforward along any map kind other than identity/inclusion."""

    def __init__(self, m: TheoryMap):
        self.m = m

    def ctx(self, ctx: TypeCtx) -> tuple[TypeCtx, dict[Ident, AlgTerm]]:
        tag = fresh_tag()
        env: dict[Ident, AlgTerm] = {}
        entries = []
        for i, (ident, ty) in enumerate(ctx, start=1):
            entries.append((ident.name, self.type(ctx, ty, env)))
            env[ident] = Var(Ident(tag, i, ident.name))
        return TypeCtx.build(tag, entries), env

    def term(self, ctx: TypeCtx, t: AlgTerm, env) -> AlgTerm:
        if isinstance(t, Var):
            return env[t.id]
        args = tuple(self.term(ctx, a, env) for a in t.args)
        m = self.m
        if isinstance(m, SimpleMap):
            return App(image_ident(m, t.head), args)
        image = m.termmap.get(t.head)
        if image is None:
            raise MissingImage(f"{m.name} has no image for {t.head.name}")
        return self._instantiate(ctx, m.dom.termcon(t.head), t.args, args, image.ctx, image.term, env)

    def type(self, ctx: TypeCtx, ty: AlgType, env) -> AlgType:
        args = tuple(self.term(ctx, a, env) for a in ty.args)
        m = self.m
        if isinstance(m, SimpleMap):
            return AlgType(image_ident(m, ty.head), args)
        image = m.typemap.get(ty.head)
        if image is None:
            raise MissingImage(f"{m.name} has no image for {ty.head.name}")
        return self._instantiate(ctx, m.dom.typecon(ty.head), ty.args, args, image.ctx, image.type, env)

    def _instantiate(self, ctx, con, raw_args, pushed, ictx: TypeCtx, body, env):
        sub: dict[Ident, AlgTerm] = {}
        for p, val in zip(con.args, pushed):
            sub[ictx.ident(p.index)] = val
        needed = [v for v in free_vars(body) if v not in sub]
        if needed:
            sigma = solve_args(self.m.dom, ctx, con, raw_args, strict=False)
            for v in needed:
                src = con.localcontext.ident(v.index)
                sub[v] = self.term(ctx, sigma[src], env)
        return subst(body, sub)


def pushforward(m: TheoryMap, x):
    """Push a :class:`TermInCtx`, :class:`TypeInCtx` or :class:`TypeCtx` along ``m``."""
    if isinstance(m, (IdMap, InclMap)):
        return x
    p = _Pusher(m)
    if isinstance(x, TypeCtx):
        return p.ctx(x)[0]
    if isinstance(x, TermInCtx):
        ctx, env = p.ctx(x.ctx)
        return TermInCtx(ctx, p.term(x.ctx, x.term, env))
    if isinstance(x, TypeInCtx):
        ctx, env = p.ctx(x.ctx)
        return TypeInCtx(ctx, p.type(x.ctx, x.type, env))
    raise TypeError(f"cannot push forward {type(x).__name__}")


def pushforward_in(m: TheoryMap, ctx: TypeCtx, terms) -> tuple[TypeCtx, list]:
    """Push several terms sharing one context (e.g. both sides of an axiom)."""
    if isinstance(m, (IdMap, InclMap)):
        return ctx, list(terms)
    p = _Pusher(m)
    new_ctx, env = p.ctx(ctx)
    return new_ctx, [p.term(ctx, t, env) for t in terms]


# ---------------------------------------------------------------------------
# promotion and composition

def promote(m: TheoryMap) -> GeneralMap:
    if isinstance(m, GeneralMap):
        return m
    typemap = {i: pushforward(m, generic_type(m.dom, i)) for i, _ in m.dom.typecons()}
    termmap = {i: pushforward(m, generic_term(m.dom, i)) for i, _ in m.dom.termcons()}
    return GeneralMap(m.dom, m.codom, typemap, termmap, m.name)


def _same_theory(a: GAT, b: GAT) -> bool:
    return a is b or a == b


def compose_maps(f: TheoryMap, g: TheoryMap) -> TheoryMap:
    """``g ∘ f``: first ``f``, then ``g``."""
    if not _same_theory(f.codom, g.dom):
        raise TheoryMismatch(f"cannot compose {f.name}: {f.dom.name}→{f.codom.name} "
                             f"with {g.name}: {g.dom.name}→{g.codom.name}")
    name = f"{g.name}∘{f.name}"
    if isinstance(f, IdMap):
        return g
    if isinstance(g, IdMap):
        return f
    if isinstance(f, InclMap) and isinstance(g, InclMap):
        return InclMap(f.dom, g.codom, name)
    if isinstance(f, (InclMap, SimpleMap)) and isinstance(g, (InclMap, SimpleMap)):
        typemap = {i: image_ident(g, image_ident(f, i)) for i, _ in f.dom.typecons()}
        termmap = {i: image_ident(g, image_ident(f, i)) for i, _ in f.dom.termcons()}
        return SimpleMap(f.dom, g.codom, typemap, termmap, name)
    pf = promote(f)
    typemap = {i: pushforward(g, img) for i, img in pf.typemap.items()}
    termmap = {i: pushforward(g, img) for i, img in pf.termmap.items()}
    return GeneralMap(f.dom, g.codom, typemap, termmap, name)


def narrow(m: GeneralMap) -> TheoryMap:
    """The narrowest representation of ``m``: Id, then Incl, then Simple."""
    typemap: dict[Ident, Ident] = {}
    termmap: dict[Ident, Ident] = {}
    for i, con in m.dom.constructors():
        is_type = isinstance(con, TypeConstructor)
        image = m.typemap.get(i) if is_type else m.termmap.get(i)
        if image is None:
            return m
        body = image.type if is_type else image.term
        if not isinstance(body, (App, AlgType)):
            return m
        expected = tuple(Var(image.ctx.ident(p.index)) for p in con.args)
        if len(image.ctx) != len(con.localcontext) or tuple(body.args) != expected:
            return m
        target = body.head
        if target not in m.codom:
            return m
        tj = m.codom.judgment(target)
        if isinstance(tj, TypeConstructor) != is_type or not isinstance(tj, (TypeConstructor, TermConstructor)):
            return m
        (typemap if is_type else termmap)[i] = target
    identical = all(k == v for k, v in {**typemap, **termmap}.items())
    dom_tags = set(m.dom.tags())
    if identical and dom_tags <= set(m.codom.tags()):
        if _same_theory(m.dom, m.codom):
            return IdMap(m.dom, m.name)
        return InclMap(m.dom, m.codom, m.name)
    simple = SimpleMap(m.dom, m.codom, typemap, termmap, m.name)
    try:
        if check_welltyped(simple) or check_simple_validity(simple):
            return m
    except GatError:
        return m
    return simple


# ---------------------------------------------------------------------------
# checks

@dataclass(frozen=True)
class Diagnostic:
    constructor: str
    kind: str
    message: str
    span: tuple | None = None

    def __str__(self):
        msg = self.message[:1].upper() + self.message[1:]
        where = f" at {self.span[0]}:{self.span[1]}" if self.span else ""
        return f"{self.constructor}{where}: {self.kind}: {msg}"

    def to_dict(self) -> dict:
        return {"constructor": self.constructor, "kind": self.kind, "message": self.message,
                "span": list(self.span) if self.span else None}


def _diag(m, ident, con_name, e: GatError) -> Diagnostic:
    span = getattr(m, "spans", {}).get(ident) or e.span
    return Diagnostic(con_name, type(e).__name__, e.message, span)


def _types_agree(gat: GAT, a: AlgType, b: AlgType) -> bool:
    if a.head != b.head or len(a.args) != len(b.args):
        return False
    return all(normalize(x, gat.policy) == normalize(y, gat.policy) for x, y in zip(a.args, b.args))


def check_welltyped(m: TheoryMap) -> list[Diagnostic]:
    """Per-constructor diagnostics; an empty list means well-typed."""
    out: list[Diagnostic] = []
    if isinstance(m, IdMap):
        return out
    if isinstance(m, InclMap):
        for scope in m.dom.segments:
            if not m.codom.segments.has_tag(scope.tag) or m.codom.segments.scope(scope.tag) != scope:
                names = ", ".join(b.name or "axiom" for b in scope.bindings)
                out.append(Diagnostic(names, "NotAnInclusion",
                                      f"segment of {m.dom.name} is not part of {m.codom.name}"))
        return out
    if isinstance(m, SimpleMap):
        for i, con in m.dom.constructors():
            is_type = isinstance(con, TypeConstructor)
            table = m.typemap if is_type else m.termmap
            if i not in table:
                out.append(Diagnostic(con.name, "MissingImage", f"no image for {con.name}"))
                continue
            t = table[i]
            if t not in m.codom:
                out.append(Diagnostic(con.name, "UnknownConstructor", f"{t.name} is not in {m.codom.name}"))
                continue
            tj = m.codom.judgment(t)
            if not isinstance(tj, TypeConstructor if is_type else TermConstructor):
                kind = "type" if is_type else "term"
                out.append(Diagnostic(con.name, "SortMismatch", f"{t.name} is not a {kind} constructor"))
                continue
            if len(tj.args) != len(con.args):
                out.append(Diagnostic(con.name, "ArityMismatch",
                                      f"ill-typed arguments for {tj.name}: expected {len(tj.args)}, "
                                      f"got {len(con.args)}"))
        if out:
            return out
        return check_welltyped(promote(m))

    for i, con in m.dom.constructors():
        is_type = isinstance(con, TypeConstructor)
        image = (m.typemap if is_type else m.termmap).get(i)
        if image is None:
            out.append(Diagnostic(con.name, "MissingImage", f"no image for {con.name}", m.spans.get(i)))
            continue
        try:
            if is_type:
                check_type(m.codom, image.ctx, image.type)
                if len(image.ctx) != len(con.localcontext):
                    raise ArityMismatch(f"image context of {con.name} has the wrong length")
            else:
                check_term(m.codom, image.ctx, image.term)
                expected = _expected_type(m, con, image.ctx)
                if expected is not None:
                    got = infer_type(m.codom, image.ctx, image.term, strict=True)
                    if not _types_agree(m.codom, got, expected):
                        from .surface.pretty import show_type

                        raise SortMismatch(
                            f"image of {con.name} has type {show_type(m.codom, got)}, "
                            f"expected {show_type(m.codom, expected)}"
                        )
        except GatError as e:
            out.append(_diag(m, i, con.name, e))
    return out


def _expected_type(m: GeneralMap, con: TermConstructor, ictx: TypeCtx) -> AlgType | None:
    """The pushed-forward result type of ``con``, expressed in ``ictx``.

    ``None`` if the image context itself is ill-formed (the type images are
    already reported in that case)."""
    p = _Pusher(m)
    try:
        env = {src: Var(dst) for src, dst in zip(con.localcontext.idents(), ictx.idents())}
        for _, ty in ictx:
            check_type(m.codom, ictx, ty, strict=True)
        return p.type(con.localcontext, con.type, env)
    except GatError:
        return None


def check_simple_validity(m: SimpleMap) -> list[Diagnostic]:
    """Each assignment must send the generic term to the target's generic term."""
    from .surface.pretty import pretty

    out = []
    for i, con in m.dom.constructors():
        is_type = isinstance(con, TypeConstructor)
        target = image_ident(m, i)
        try:
            if is_type:
                lhs = pushforward(m, generic_type(m.dom, i))
                rhs = generic_type(m.codom, target)
            else:
                lhs = pushforward(m, generic_term(m.dom, i))
                rhs = generic_term(m.codom, target)
        except GatError as e:
            out.append(Diagnostic(con.name, type(e).__name__, e.message))
            continue
        if not alpha_equal(lhs, rhs):
            out.append(Diagnostic(
                con.name, "NotSimple",
                f"{pretty(lhs, m.codom)} is not the generic {pretty(rhs, m.codom)}",
            ))
    return out


# ---------------------------------------------------------------------------
# axiom preservation

PROVED, COUNTEREXAMPLE, UNVERIFIED = "ProvedByNormalization", "Counterexample", "Unverified"


@dataclass
class AxiomStatus:
    axiom: str
    status: str
    lhs: TermInCtx | None = None
    rhs: AlgTerm | None = None
    env: dict[str, Any] | None = None
    model: str | None = None
    values: tuple | None = None
    checked: int = 0
    detail: str = ""

    def to_dict(self, show=repr) -> dict:
        d: dict[str, Any] = {"axiom": self.axiom, "status": self.status}
        if self.env is not None:
            d["env"] = {k: show(v) for k, v in self.env.items()}
            d["model"] = self.model
            d["values"] = [show(v) for v in self.values]
        if self.checked:
            d["checked"] = self.checked
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class ValidityReport:
    map: str
    welltyped: bool
    errors: list[Diagnostic] = field(default_factory=list)
    axioms: list[AxiomStatus] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[AxiomStatus]:
        return [a for a in self.axioms if a.status == COUNTEREXAMPLE]

    @property
    def ok(self) -> bool:
        return self.welltyped and not self.counterexamples

    def to_dict(self, show=repr) -> dict:
        return {"map": self.map, "welltyped": self.welltyped, "ok": self.ok,
                "errors": [e.to_dict() for e in self.errors],
                "axioms": [a.to_dict(show) for a in self.axioms]}

    def to_text(self, show=repr) -> str:
        lines = [f"{self.map}: {'well-typed' if self.welltyped else 'ILL-TYPED'}"]
        lines += [f"  {e}" for e in self.errors]
        for a in self.axioms:
            if a.status == COUNTEREXAMPLE:
                env = ", ".join(f"{k}={show(v)}" for k, v in a.env.items())
                lines.append(f"  {a.axiom}: Counterexample in {a.model}: {env} "
                             f"({show(a.values[0])} != {show(a.values[1])})")
            else:
                extra = f" ({a.detail})" if a.detail else ""
                lines.append(f"  {a.axiom}: {a.status}{extra}")
        return "\n".join(lines)


def check_axiom_preservation(m: TheoryMap, witness=None, enumerators=None, bound: int | None = 100
                             ) -> ValidityReport:
    """Try normalization first, then a bounded counterexample search in ``witness``."""
    from .models.axioms import axiom_label, resolve_enumerators, search

    errors = check_welltyped(m)
    report = ValidityReport(m.name, not errors, errors)
    if errors:
        return report
    enums = resolve_enumerators(witness, enumerators) if witness is not None else {}
    for ident, ax in m.dom.axioms():
        label = axiom_label(m.dom, ident, ax)
        ctx, (lhs, rhs) = pushforward_in(m, ax.localcontext, [ax.lhs, ax.rhs])
        image = TermInCtx(ctx, lhs)
        if equal_upto_norm(m.codom, ctx, lhs, rhs):
            report.axioms.append(AxiomStatus(label, PROVED, image, rhs))
            continue
        if witness is None:
            report.axioms.append(AxiomStatus(label, UNVERIFIED, image, rhs, detail="no witness model"))
            continue
        res = search(witness, ctx, lhs, rhs, enums, bound, label)
        if res.status == "counterexample":
            report.axioms.append(AxiomStatus(label, COUNTEREXAMPLE, image, rhs, res.env, witness.name,
                                             (res.lhs_value, res.rhs_value), res.checked))
        else:
            detail = res.reason or f"no counterexample in {res.checked} assignments"
            report.axioms.append(AxiomStatus(label, UNVERIFIED, image, rhs, checked=res.checked, detail=detail))
    return report


# ---------------------------------------------------------------------------
# migration

def migrate_model(m: TheoryMap, mb, name: str | None = None):
    """Pull a model of ``m.codom`` back to a model of ``m.dom``."""
    from .models.base import Model, eval_term

    if not _same_theory(mb.theory, m.codom):
        raise TheoryMismatch(f"model {mb.name} is of {mb.theory.name}, expected {m.codom.name}")
    if isinstance(m, IdMap):
        return mb
    g = promote(m)
    for i, tc in g.dom.constructors():
        image = g.termmap[i] if i in g.termmap else g.typemap[i]
        explicit = {image.ctx.ident(p.index) for p in tc.args}
        body = image.term if isinstance(image, TermInCtx) else image.type
        for v in free_vars(body):
            if v not in explicit:
                raise ErasureViolation(
                    f"image of {tc.name} uses implicit variable {v.name}, which a model cannot see"
                )

    def coercion(tc, image: TypeInCtx):
        arg_ids = [image.ctx.ident(p.index) for p in tc.args]

        def coerce(v, *tyargs):
            env = dict(zip(arg_ids, tyargs))
            targs = [eval_term(mb, env, a) for a in image.type.args]
            return mb.coerce(image.type.head, v, targs)
        return coerce

    def operation(tc, image: TermInCtx):
        arg_ids = [image.ctx.ident(p.index) for p in tc.args]

        def apply(*vals):
            return eval_term(mb, dict(zip(arg_ids, vals)), image.term)
        return apply

    types = {i: coercion(tc, g.typemap[i]) for i, tc in g.dom.typecons()}
    ops = {i: operation(tc, g.termmap[i]) for i, tc in g.dom.termcons()}
    enums = {}
    for i, tc in g.dom.typecons():
        enum = _migrated_enumerator(mb, tc, g.typemap[i])
        if enum is not None:
            enums[i] = enum
    return Model(g.dom, name or f"{m.name}*{mb.name}", types, ops,
                 params={"map": m.name, "model": mb.name}, enumerators=enums, show=mb.show)


def _migrated_enumerator(mb, tc, image: TypeInCtx):
    from .models.base import eval_term

    base = mb.enumerator(image.type.head)
    if base is None:
        return None
    arg_ids = [image.ctx.ident(p.index) for p in tc.args]

    def enum(*tyargs):
        env = dict(zip(arg_ids, tyargs))
        targs = [eval_term(mb, env, a) for a in image.type.args]
        return base(*targs) if callable(base) else base
    return enum
