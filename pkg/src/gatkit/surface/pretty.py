"""Printing theories, maps, terms and contexts back to ``.gat`` syntax.

Output re-parses to an alpha-equal entity. Binary operators print infix
and left-nested chains print without parentheses (``a+b+c``).
"""

from __future__ import annotations

from ..scopes import Ident
from ..syntax import (
    GAT,
    AlgType,
    App,
    Axiom,
    TermConstructor,
    TermInCtx,
    TypeConstructor,
    TypeCtx,
    TypeInCtx,
    Var,
)
from .lexer import is_name


class Printer:
    def __init__(self, gat: GAT | None = None):
        self.gat = gat

    # -- names ---------------------------------------------------------------
    def con_name(self, ident: Ident) -> str:
        if self.gat is not None:
            return self.gat.display(ident)
        return ident.name

    def infix_symbol(self, ident: Ident, nargs: int) -> str | None:
        if nargs != 2:
            return None
        name = self.con_name(ident)
        if self.gat is not None:
            sym = self.gat.alias_for(name)
            if sym is not None and self._alias_unique(sym, name):
                return sym
        if not is_name(name):
            return name
        return None

    def _alias_unique(self, sym, name) -> bool:
        return self.gat.alias_target(sym) == name

    def prefix_name(self, ident: Ident) -> str:
        name = self.con_name(ident)
        return name if is_name(name) else f"({name})"

    # -- terms ---------------------------------------------------------------
    def term(self, t, names: dict[Ident, str]) -> str:
        if isinstance(t, Var):
            return names.get(t.id, t.id.name)
        sym = self.infix_symbol(t.head, len(t.args))
        if sym is not None:
            left, right = t.args
            ls = self.term(left, names)
            rs = self.term(right, names)
            if self._is_infix(right):
                rs = f"({rs})"
            if self._is_infix(left) and left.head != t.head:
                ls = f"({ls})"
            return f"{ls}{sym}{rs}"
        args = ",".join(self.term(a, names) for a in t.args)
        return f"{self.prefix_name(t.head)}({args})"

    def _is_infix(self, t) -> bool:
        return isinstance(t, App) and self.infix_symbol(t.head, len(t.args)) is not None

    def type(self, ty: AlgType, names: dict[Ident, str], *, bare: bool = False) -> str:
        sym = self.infix_symbol(ty.head, len(ty.args))
        if sym is not None:
            left, right = ty.args
            ls, rs = self.term(left, names), self.term(right, names)
            if self._is_infix(right):
                rs = f"({rs})"
            text = f"{ls}{sym}{rs}"
            return text if bare else f"({text})"
        if not ty.args:
            return self.prefix_name(ty.head)
        args = ",".join(self.term(a, names) for a in ty.args)
        return f"{self.prefix_name(ty.head)}({args})"

    # -- contexts ------------------------------------------------------------
    def ctx_names(self, ctx: TypeCtx, outer: dict[Ident, str] | None = None) -> dict[Ident, str]:
        names = dict(outer or {})
        used = set(names.values())
        for ident, _ in ctx:
            base = ident.name if ident.name and is_name(ident.name) else "x"
            cand, k = base, 1
            while cand in used:
                k += 1
                cand = f"{base}{k}"
            used.add(cand)
            names[ident] = cand
        return names

    def _is_default(self, ty: AlgType) -> bool:
        if ty.args or self.gat is None:
            return False
        cands = self.gat.resolve_all("default", 0, kind="type")
        return bool(cands) and cands[0] == ty.head

    def ctx(self, ctx: TypeCtx, names: dict[Ident, str], *, types: bool = True) -> str:
        groups: list[tuple[list[str], AlgType]] = []
        for ident, ty in ctx:
            if types and groups and groups[-1][1] == ty and not _mentions(ty, ident):
                groups[-1][0].append(names[ident])
            else:
                groups.append(([names[ident]], ty))
        parts = []
        for vs, ty in groups:
            if not types or self._is_default(ty):
                parts.extend(vs)
                continue
            lhs = vs[0] if len(vs) == 1 else "(" + ",".join(vs) + ")"
            parts.append(f"{lhs}::{self.type(ty, names)}")
        return "[" + ", ".join(parts) + "]"

    def in_ctx(self, x) -> str:
        names = self.ctx_names(x.ctx)
        body = self.term(x.term, names) if isinstance(x, TermInCtx) else self.type(x.type, names, bare=True)
        if len(x.ctx) == 0:
            return body
        return f"{body} ⊣ {self.ctx(x.ctx, names)}"

    # -- judgments -----------------------------------------------------------
    def head(self, ident_name: str, args: list[str]) -> str:
        if len(args) == 2 and not is_name(ident_name):
            return f"({args[0]}{ident_name}{args[1]})"
        name = ident_name if is_name(ident_name) else f"({ident_name})"
        return f"{name}({','.join(args)})"

    def judgment(self, j) -> str:
        names = self.ctx_names(j.localcontext)
        ctx = self.ctx(j.localcontext, names)
        turnstile = f" ⊣ {ctx}" if len(j.localcontext) else ""
        if isinstance(j, TypeConstructor):
            if not j.args and is_name(j.name):
                return f"{j.name} :: TYPE{turnstile}"
            return f"{self.head(j.name, [names[a] for a in j.args])} :: TYPE{turnstile}"
        if isinstance(j, TermConstructor):
            return f"{self.head(j.name, [names[a] for a in j.args])} :: {self.type(j.type, names)}{turnstile}"
        label = f"{j.name} := " if j.name else ""
        return f"{label}{self.term(j.lhs, names)} == {self.term(j.rhs, names)}{turnstile}"


def _mentions(ty: AlgType, ident: Ident) -> bool:
    from ..syntax import free_vars

    return ident in free_vars(ty)


def _policy_line(gat: GAT, op: Ident) -> str:
    name = gat.display(op)
    line = f"  normalize {name if is_name(name) else f'({name})'}"
    if op in gat.policy.assoc:
        line += " assoc"
    unit = gat.policy.unit_of(op)
    if unit is not None:
        line += f" unit {gat.display(unit)}"
    return line


def pretty_theory(gat: GAT) -> str:
    """Each ``normalize`` line follows the segment that completes its
    declaration, so overloaded operators resolve as they did originally."""
    p = Printer(gat)
    lines = [f"theory {gat.name} {{"]
    for sym, name in gat.aliases:
        lines.append(f"  alias {sym} = {name}")
    seg_of = {s.tag: k for k, s in enumerate(gat.segments)}
    pending: dict[int, list[Ident]] = {}
    for op in sorted(gat.policy.assoc | {o for o, _ in gat.policy.units}, key=gat.position):
        unit = gat.policy.unit_of(op)
        at = max(seg_of[op.tag], seg_of[unit.tag] if unit is not None else 0)
        pending.setdefault(at, []).append(op)
    for k, scope in enumerate(gat.segments):
        if k:
            lines.append("  segment")
        for b in scope.bindings:
            lines.append("  " + p.judgment(b.payload))
        for op in pending.get(k, []):
            lines.append(_policy_line(gat, op))
    lines.append("}")
    return "\n".join(lines)


def pretty_map(m) -> str:
    from ..morphisms import promote

    g = promote(m)
    dp, cp = Printer(g.dom), Printer(g.codom)
    lines = [f"map {m.name}({g.dom.name}, {g.codom.name}) {{"]
    for ident, con in g.dom.typecons() + g.dom.termcons():
        image = g.typemap[ident] if isinstance(con, TypeConstructor) else g.termmap[ident]
        names = cp.ctx_names(image.ctx)
        arg_names = [names[image.ctx.ident(p.index)] for p in con.args]
        sym = dp.infix_symbol(ident, len(con.args))
        if sym is not None:
            lhs = f"{arg_names[0]}{sym}{arg_names[1]}"
        elif not con.args and isinstance(con, TypeConstructor):
            lhs = dp.prefix_name(ident)
        else:
            lhs = f"{dp.prefix_name(ident)}({','.join(arg_names)})"
        if len(image.ctx):
            lhs += " ⊣ " + cp.ctx(image.ctx, names, types=False)
        if isinstance(con, TypeConstructor):
            rhs = cp.type(image.type, names, bare=True)
        else:
            rhs = cp.term(image.term, names)
        lines.append(f"  {lhs} => {rhs}")
    lines.append("}")
    return "\n".join(lines)


def pretty(x, gat: GAT | None = None) -> str:
    from ..morphisms import GeneralMap, IdMap, InclMap, SimpleMap

    if isinstance(x, GAT):
        return pretty_theory(x)
    if isinstance(x, (IdMap, InclMap, SimpleMap, GeneralMap)):
        return pretty_map(x)
    if isinstance(x, (TermInCtx, TypeInCtx)):
        return Printer(gat).in_ctx(x)
    if isinstance(x, TypeCtx):
        p = Printer(gat)
        return p.ctx(x, p.ctx_names(x))
    if isinstance(x, (TypeConstructor, TermConstructor, Axiom)):
        return Printer(gat).judgment(x)
    if isinstance(x, AlgType):
        return Printer(gat).type(x, {}, bare=True)
    return Printer(gat).term(x, {})


def show_type(gat: GAT, ty: AlgType) -> str:
    return Printer(gat).type(ty, {}, bare=True)


def show_term(gat: GAT, t) -> str:
    return Printer(gat).term(t, {})
