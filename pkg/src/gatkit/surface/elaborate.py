"""Name resolution: raw syntax trees to theories, maps and terms."""

from __future__ import annotations

from ..builder import TheoryBuilder
from ..errors import (
    ArityMismatch,
    AmbiguousOverload,
    ConflictingDeclaration,
    DuplicateName,
    GatError,
    GatSyntaxError,
    MissingImage,
    UnboundName,
    UnknownConstructor,
    UnknownName,
    UnknownParent,
    UnknownTheory,
)
from ..kernel import check_context, check_term
from ..scopes import Ident, fresh_tag, map_idents
from ..syntax import (
    GAT,
    AlgType,
    App,
    TermConstructor,
    TermInCtx,
    TypeConstructor,
    TypeCtx,
    TypeInCtx,
    Var,
)
from .parser import (
    RAlias,
    RApp,
    RAxiom,
    RBin,
    RBinding,
    RMap,
    RName,
    RPolicy,
    RSegmentBreak,
    RTermcon,
    RTheory,
    RTyped,
    RTypecon,
    RUsing,
    parse_raw_term,
    parse_source,
)
from .registry import Registry


def _span(node):
    return getattr(node, "span", None)


class Names:
    """Resolution for one judgment or term: context variables shadow
    constructors; overloads are chosen by arity, then by argument sorts."""

    def __init__(self, view, tag=None, names=(), types=None):
        self.view = view
        self.gat: GAT = view.current() if isinstance(view, TheoryBuilder) else view
        self.tag = tag
        self.names = list(names)
        self.types: dict[Ident, AlgType] = dict(types or {})

    def var(self, name: str) -> Ident | None:
        for i, n in enumerate(self.names, start=1):
            if n == name:
                return Ident(self.tag, i, name)
        return None

    def _sort_of(self, t):
        if isinstance(t, Var):
            ty = self.types.get(t.id)
            return ty.head if ty is not None else None
        j = self.gat._index.get(t.head)
        return j.type.head if isinstance(j, TermConstructor) else None

    def _choose(self, cands: list[Ident], args) -> Ident:
        if len(cands) == 1:
            return cands[0]
        for c in cands:
            con = self.gat.judgment(c)
            if len(con.args) != len(args):
                continue
            ok = True
            for p, a in zip(con.args, args):
                got = self._sort_of(a)
                if got is not None and got != con.localcontext.type_of(p).head:
                    ok = False
                    break
            if ok:
                return c
        return cands[0]

    def _constructor(self, name: str, args, kind: str, node) -> Ident:
        cands = self.view.resolve_all(name, len(args), kind=kind)
        if not cands:
            # wrong arity is reported by the checker, not here
            cands = self.view.resolve_all(name, None, kind=kind)
        if not cands:
            what = "type" if kind == "type" else "term"
            raise UnboundName(f"unbound {what} constructor {name!r}", span=_span(node))
        return self._choose(cands, args)

    def term(self, node):
        if isinstance(node, RName):
            v = self.var(node.name)
            if v is not None:
                return Var(v)
            return App(self._constructor(node.name, (), "term", node), ())
        if isinstance(node, (RApp, RBin)):
            name = node.name if isinstance(node, RApp) else node.op
            raw = node.args if isinstance(node, RApp) else (node.left, node.right)
            if self.var(name) is not None:
                raise UnknownConstructor(f"{name} is a variable, not a constructor", span=_span(node))
            args = tuple(self.term(a) for a in raw)
            return App(self._constructor(name, args, "term", node), args)
        if isinstance(node, RTyped):
            raise GatSyntaxError("typed arguments are only allowed in declarations", span=node.span)
        raise GatSyntaxError(f"unexpected {node!r}", span=_span(node))

    def type(self, node) -> AlgType:
        if isinstance(node, RName):
            if self.var(node.name) is not None and not self.view.resolve_all(node.name, None, kind="type"):
                raise UnknownConstructor(f"{node.name} is a variable, not a type", span=node.span)
            return AlgType(self._constructor(node.name, (), "type", node), ())
        if isinstance(node, (RApp, RBin)):
            name = node.name if isinstance(node, RApp) else node.op
            raw = node.args if isinstance(node, RApp) else (node.left, node.right)
            args = tuple(self.term(a) for a in raw)
            return AlgType(self._constructor(name, args, "type", node), args)
        if isinstance(node, RTyped):
            raise GatSyntaxError("typed arguments are only allowed in declarations", span=node.span)
        raise GatSyntaxError(f"expected a type, found {node!r}", span=_span(node))


def _with_span(e: GatError, span):
    return e.with_span(span)


def default_type(view, span=None) -> AlgType:
    cands = view.resolve_all("default", 0, kind="type")
    if not cands:
        raise UnboundName("untyped variable needs a `default` type in scope", span=span)
    return AlgType(cands[0], ())


def elab_ctx(view, bindings: list[RBinding]) -> tuple[TypeCtx, Names]:
    """Elaborate a context as one scope so forward references are caught
    by the checker (and reported at the offending binding)."""
    tag = fresh_tag()
    seen = {}
    for b in bindings:
        if b.name in seen:
            raise DuplicateName(f"variable {b.name} is bound twice", span=b.span)
        seen[b.name] = b
    names = Names(view, tag, [b.name for b in bindings])
    entries = []
    for i, b in enumerate(bindings, start=1):
        try:
            ty = default_type(view, b.span) if b.type is None else names.type(b.type)
        except GatError as e:
            raise e.with_span(b.span)
        names.types[Ident(tag, i, b.name)] = ty
        entries.append((b.name, ty))
    ctx = TypeCtx.build(tag, entries)
    try:
        check_context(names.gat, ctx)
    except GatError as e:
        pos = getattr(e, "position", None)
        raise e.with_span(bindings[pos - 1].span if pos else None)
    return ctx, names


# ---------------------------------------------------------------------------
# theories

def _head(lhs):
    """Constructor name and ``(arg, type-or-None, span)`` triples of a declaration head."""
    def arg(a):
        if isinstance(a, RName):
            return RBinding(a.name, None, a.span)
        if isinstance(a, RTyped):
            return RBinding(a.name, a.type, a.span)
        raise GatSyntaxError("constructor parameters must be variables", span=_span(a))

    if isinstance(lhs, RName):
        return lhs.name, []
    if isinstance(lhs, RApp):
        return lhs.name, [arg(a) for a in lhs.args]
    if isinstance(lhs, RBin):
        return lhs.op, [arg(lhs.left), arg(lhs.right)]
    raise GatSyntaxError("expected a constructor declaration", span=_span(lhs))


def _signature(b: TheoryBuilder, line):
    name, params = _head(line.lhs)
    name = b.alias_target(name)
    turnstile = list(line.ctx or [])
    inline = {p.name: p for p in params}
    if len(inline) != len(params):
        raise DuplicateName(f"{name} lists a parameter twice", span=line.span)
    bindings, conflicts = [], []
    for t in turnstile:
        p = inline.get(t.name)
        if p is not None and p.type is not None:
            if t.type is None:
                t = RBinding(t.name, p.type, t.span)
            else:
                conflicts.append((t.name, p))
        bindings.append(t)
    listed = {t.name for t in turnstile}
    bindings += [p for p in params if p.name not in listed]
    ctx, names = elab_ctx(b, bindings)
    for vname, p in conflicts:
        ident = ctx.lookup_name(vname)
        if names.type(p.type) != ctx.type_of(ident):
            raise ConflictingDeclaration(
                f"parameter {vname} of {name} is declared with two different types", span=p.span
            )
    args = tuple(ctx.lookup_name(p.name) for p in params)
    return name, ctx, names, args


def _line(b: TheoryBuilder, line, pending_aliases):
    if isinstance(line, RTypecon):
        name, ctx, _, args = _signature(b, line)
        b.add_typecon(name, ctx, args)
    elif isinstance(line, RTermcon):
        name, ctx, names, args = _signature(b, line)
        ty = names.type(line.type)
        b.add_termcon(name, ctx, args, ty)
    elif isinstance(line, RAxiom):
        ctx, names = elab_ctx(b, list(line.ctx or []))
        lhs, rhs = names.term(line.lhs), names.term(line.rhs)
        b.add_axiom(line.name, ctx, lhs, rhs)
    elif isinstance(line, RAlias):
        b.aliases.append((line.symbol, line.target))
        pending_aliases.append(line)
    elif isinstance(line, RPolicy):
        ops = b.resolve_all(line.op, 2, kind="term")
        if not ops:
            raise UnboundName(f"no binary term constructor {line.op!r} to normalize", span=line.span)
        unit = None
        if line.unit is not None:
            units = b.resolve_all(line.unit, None, kind="term")
            if not units:
                raise UnboundName(f"unknown unit {line.unit!r}", span=line.span)
            unit = units[0]
        b.add_policy(ops[0], assoc=line.assoc, unit=unit)
    else:
        raise GatSyntaxError("unexpected declaration", span=_span(line))


def elaborate_theory(rt: RTheory, reg: Registry) -> GAT:
    from ..colimits import extend_with_using

    parent = None
    if rt.parent is not None:
        try:
            parent = reg.theory(rt.parent)
        except UnknownTheory:
            raise UnknownParent(f"unknown parent theory {rt.parent!r}", span=rt.span) from None
    lines = list(rt.lines)
    usings = []
    while lines and isinstance(lines[0], RUsing):
        usings.append(lines.pop(0))
    base = parent
    if usings:
        clauses = [(reg.theory(u.theory, span=u.span), dict(u.renames)) for u in usings]
        base = extend_with_using(rt.name, clauses, parent=parent)
    b = TheoryBuilder(rt.name, base)
    pending: list[RAlias] = []
    for line in lines:
        if isinstance(line, RSegmentBreak):
            b = TheoryBuilder(rt.name, b.build())
            continue
        if isinstance(line, RUsing):
            raise GatSyntaxError("using clauses must come first", span=line.span)
        try:
            _line(b, line, pending)
        except GatError as e:
            raise e.with_span(_span(line))
    gat = b.build()
    for a in pending:
        if not gat.resolve_all(a.target):
            raise UnknownName(f"alias {a.symbol} refers to unknown constructor {a.target!r}", span=a.span)
    return gat


# ---------------------------------------------------------------------------
# maps

def _clause_head(dom: GAT, lhs):
    if isinstance(lhs, RName):
        name, params = lhs.name, None
    elif isinstance(lhs, RApp):
        name, params = lhs.name, list(lhs.args)
    elif isinstance(lhs, RBin):
        name, params = lhs.op, [lhs.left, lhs.right]
    else:
        raise GatSyntaxError("expected a constructor pattern", span=_span(lhs))
    arity = None if params is None else len(params)
    cands = dom.resolve_all(name, arity, kind="any")
    if not cands:
        raise UnknownConstructor(f"{name!r} is not a constructor of {dom.name}", span=_span(lhs))
    if len(cands) > 1 and params is None:
        raise AmbiguousOverload(f"{name!r} is overloaded in {dom.name}; give its arguments", span=_span(lhs))
    names = []
    for p in params or []:
        if not isinstance(p, RName):
            raise GatSyntaxError("pattern arguments must be variables", span=_span(p))
        names.append(p.name)
    return cands[0], names if params is not None else None


def _image_ctx(partial, con, clause) -> TypeCtx:
    from ..morphisms import _Pusher

    ictx, _ = _Pusher(partial).ctx(con.localcontext)
    names = list(con.localcontext.names())
    if clause is not None:
        _, arg_names, ctx_bindings = clause
        if ctx_bindings is not None:
            if len(ctx_bindings) != len(names):
                raise ArityMismatch(
                    f"pattern context for {con.name} has {len(ctx_bindings)} variables, expected {len(names)}"
                )
            names = [b.name for b in ctx_bindings]
        if arg_names is not None:
            if len(arg_names) != len(con.args):
                raise ArityMismatch(f"pattern for {con.name} has the wrong number of arguments")
            for p, n in zip(con.args, arg_names):
                if ctx_bindings is not None and names[p.index - 1] != n:
                    raise ConflictingDeclaration(f"pattern argument {n} disagrees with its context")
                names[p.index - 1] = n
    tag = ictx.tag

    def rename(i: Ident) -> Ident:
        return i.renamed(names[i.index - 1]) if i.tag == tag else i

    entries = [(n, map_idents(ty, rename)) for n, ty in zip(names, ictx.types())]
    return TypeCtx.build(tag, entries)


def _generic_rhs(codom: GAT, rhs, con, ictx, kind):
    """A bare constructor name on the right means "applied to the explicit
    arguments", as in ``Hom => Leq``."""
    if not isinstance(rhs, RName) or ictx.lookup_name(rhs.name) is not None:
        return None
    cands = codom.resolve_all(rhs.name, len(con.args), kind=kind)
    if not cands:
        return None
    args = tuple(Var(ictx.ident(p.index)) for p in con.args)
    return AlgType(cands[0], args) if kind == "type" else App(cands[0], args)


def elaborate_map(rm: RMap, reg: Registry):
    from ..morphisms import GeneralMap, narrow

    dom = reg.theory(rm.dom, span=rm.span)
    codom = reg.theory(rm.codom, span=rm.span)
    clauses = {}
    spans = {}
    for c in rm.clauses:
        ident, arg_names = _clause_head(dom, c.lhs)
        if ident in clauses:
            raise DuplicateName(f"{ident.name} is mapped twice", span=c.span)
        clauses[ident] = (c, arg_names, c.ctx)
        spans[ident] = c.span
    typemap, termmap = {}, {}
    partial = GeneralMap(dom, codom, typemap, termmap, rm.name, spans)
    for ident, con in dom.typecons() + dom.termcons():
        kind = "type" if isinstance(con, TypeConstructor) else "term"
        entry = clauses.get(ident)
        span = entry[0].span if entry else rm.span
        try:
            ictx = _image_ctx(partial, con, entry)
            names = Names(codom, ictx.tag, ictx.names(), dict(ictx))
            if entry is not None:
                rhs = entry[0].rhs
                body = _generic_rhs(codom, rhs, con, ictx, kind)
                if body is None:
                    body = names.type(rhs) if kind == "type" else names.term(rhs)
            else:
                body = _generic_rhs(codom, RName(con.name, span), con, ictx, kind)
                if body is None:
                    raise MissingImage(f"{rm.name} gives no image for {con.name}")
        except GatError as e:
            raise e.with_span(span)
        if kind == "type":
            typemap[ident] = TypeInCtx(ictx, body)
        else:
            termmap[ident] = TermInCtx(ictx, body)
    return narrow(GeneralMap(dom, codom, typemap, termmap, rm.name, spans))


# ---------------------------------------------------------------------------
# entry points

def load_source(src: str, reg: Registry, source: str | None = None) -> list[tuple[str, object]]:
    """Parse, elaborate and register every declaration of ``src``."""
    out = []
    for decl in parse_source(src):
        if isinstance(decl, RTheory):
            entity = elaborate_theory(decl, reg)
        else:
            entity = elaborate_map(decl, reg)
        reg.add(decl.name, entity, source=source)
        out.append((decl.name, entity))
    return out


def parse_theory(src: str, reg: Registry | None = None) -> GAT:
    reg = reg if reg is not None else Registry()
    decls = load_source(src, reg)
    theories = [e for _, e in decls if isinstance(e, GAT)]
    if not theories:
        raise GatSyntaxError("no theory declared", span=(1, 1))
    return theories[-1]


def parse_map(src: str, reg: Registry):
    decls = load_source(src, reg)
    maps = [e for _, e in decls if not isinstance(e, GAT)]
    if not maps:
        raise GatSyntaxError("no map declared", span=(1, 1))
    return maps[-1]


def parse_term(src: str, gat: GAT, ctx_src: str | None = None) -> TermInCtx:
    """``"t ⊣ [ctx]"``, or ``t`` and a separate context string."""
    if ctx_src is not None:
        src = f"{src} ⊣ {ctx_src}"
    raw = parse_raw_term(src)
    ctx, names = elab_ctx(gat, list(raw.ctx or []))
    term = names.term(raw.term)
    try:
        check_term(gat, ctx, term)
    except GatError as e:
        raise e.with_span(raw.span)
    return TermInCtx(ctx, term)


def parse_type(src: str, gat: GAT) -> TypeInCtx:
    raw = parse_raw_term(src)
    ctx, names = elab_ctx(gat, list(raw.ctx or []))
    return TypeInCtx(ctx, names.type(raw.term))
