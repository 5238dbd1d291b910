"""Sort inference, type inference, context checking, substitution,
alpha-equivalence and policy normalization."""

from __future__ import annotations

from typing import Callable, Mapping

from .errors import (
    ArityMismatch,
    ForwardReference,
    GatError,
    ImplicitArgUnderdetermined,
    MissingAssignment,
    SortMismatch,
    UnboundVariable,
    UnknownConstructor,
)
from .scopes import Ident
from .syntax import (
    GAT,
    AlgSort,
    AlgTerm,
    AlgType,
    App,
    Axiom,
    NormalizationPolicy,
    TermConstructor,
    TermInCtx,
    TypeConstructor,
    TypeCtx,
    TypeInCtx,
    Var,
    free_vars,
)


def _name(gat: GAT, ident: Ident) -> str:
    return gat.display(ident) if ident in gat else ident.name


# ---------------------------------------------------------------------------
# substitution

def subst(t, env: Mapping[Ident, AlgTerm]):
    """Simultaneous substitution on a raw term or type; unmapped vars stay."""
    if isinstance(t, Var):
        return env.get(t.id, t)
    if isinstance(t, App):
        if not t.args:
            return t
        return App(t.head, tuple(subst(a, env) for a in t.args))
    if isinstance(t, AlgType):
        return AlgType(t.head, tuple(subst(a, env) for a in t.args))
    raise TypeError(f"cannot substitute into {t!r}")


def substitute(gat: GAT, t: TermInCtx, env: Mapping[Ident, AlgTerm], target_ctx: TypeCtx) -> AlgTerm:
    """Capture-avoiding substitution of ``t.term``'s context variables.

    Every free variable of the term must be assigned, and every image must
    have the sort of the variable it replaces (checked in ``target_ctx``).
    """
    for v in free_vars(t.term):
        if v not in env:
            raise MissingAssignment(f"no assignment for variable {v.name}")
        want = t.ctx.type_of(v).head
        got = infer_sort(gat, target_ctx, env[v]).head
        if got != want:
            raise SortMismatch(
                f"{v.name} has sort {_name(gat, want)} but its image has sort {_name(gat, got)}"
            )
    return subst(t.term, env)


# ---------------------------------------------------------------------------
# sorts and types

def infer_sort(gat: GAT, ctx: TypeCtx, t: AlgTerm) -> AlgSort:
    if isinstance(t, Var):
        return AlgSort(ctx.type_of(t.id).head)
    tc = gat.termcon(t.head)
    if len(t.args) != len(tc.args):
        raise ArityMismatch(
            f"{tc.name} expects {len(tc.args)} argument(s), got {len(t.args)}"
        )
    return AlgSort(tc.type.head)


def _check_arg_sorts(gat, ctx, con, args, what):
    """Sort-check explicit arguments of a constructor application."""
    if len(args) != len(con.args):
        raise ArityMismatch(
            f"ill-typed arguments for {con.name}: expected {len(con.args)}, got {len(args)}"
        )
    for p, a in zip(con.args, args):
        want = con.localcontext.type_of(p).head
        got = infer_sort(gat, ctx, a).head
        if want != got:
            raise SortMismatch(
                f"ill-typed argument for {con.name}: {_show(gat, a)} has sort "
                f"{_name(gat, got)}, expected {_name(gat, want)}"
            )


def _show(gat, t):
    if isinstance(t, Var):
        return t.id.name
    return f"{_name(gat, t.head)}({', '.join(_show(gat, a) for a in t.args)})"


def solve_args(gat: GAT, ctx: TypeCtx, con, args, *, strict: bool = True,
               policy: NormalizationPolicy | None = None) -> dict[Ident, AlgTerm]:
    """Assign every variable of ``con.localcontext`` a term in ``ctx``.

    Explicit parameters take the given arguments; implicit ones are solved by
    first-order matching of declared types against inferred types. In strict
    mode a conflicting match raises :class:`SortMismatch`.
    """
    _check_arg_sorts(gat, ctx, con, args, "term")
    lc = con.localcontext
    pol = gat.policy if policy is None else policy
    sigma: dict[Ident, AlgTerm] = {}
    todo: list[Ident] = []

    def bind(p: Ident, value: AlgTerm):
        if p in sigma:
            if strict and not _same(gat, ctx, sigma[p], value, pol):
                raise SortMismatch(
                    f"ill-typed arguments for {con.name}: {p.name} would be both "
                    f"{_show(gat, sigma[p])} and {_show(gat, value)}"
                )
            return
        sigma[p] = value
        todo.append(p)

    def match(pat: AlgTerm, val: AlgTerm):
        if isinstance(pat, Var):
            if lc.owns(pat.id):
                bind(pat.id, val)
            elif strict and pat != val:
                raise SortMismatch(f"ill-typed arguments for {con.name}: cannot match {_show(gat, val)}")
            return
        if isinstance(val, App) and val.head == pat.head and len(val.args) == len(pat.args):
            for p, v in zip(pat.args, val.args):
                match(p, v)
            return
        if strict:
            raise SortMismatch(
                f"ill-typed arguments for {con.name}: {_show(gat, val)} does not match "
                f"{_show(gat, pat)}"
            )

    for p, a in zip(con.args, args):
        bind(p, a)
    while todo:
        p = todo.pop(0)
        declared = lc.type_of(p)
        if all(v in sigma for v in free_vars(declared)) and not strict:
            continue
        actual = infer_type(gat, ctx, sigma[p], strict=strict, policy=policy)
        if actual.head != declared.head:
            raise SortMismatch(
                f"ill-typed argument for {con.name}: {_show(gat, sigma[p])} has sort "
                f"{_name(gat, actual.head)}, expected {_name(gat, declared.head)}"
            )
        for pat, val in zip(declared.args, actual.args):
            match(pat, val)
    missing = [v for v in lc.idents() if v not in sigma]
    if missing:
        raise ImplicitArgUnderdetermined(
            f"cannot infer {', '.join(v.name for v in missing)} for {con.name}"
        )
    return sigma


def _same(gat, ctx, a, b, policy) -> bool:
    if a == b:
        return True
    return normalize(a, policy) == normalize(b, policy)


def infer_type(gat: GAT, ctx: TypeCtx, t: AlgTerm, *, strict: bool = True,
               policy: NormalizationPolicy | None = None) -> AlgType:
    if isinstance(t, Var):
        return ctx.type_of(t.id)
    tc = gat.termcon(t.head)
    sigma = solve_args(gat, ctx, tc, t.args, strict=strict, policy=policy)
    return subst(tc.type, sigma)


def check_type(gat: GAT, ctx: TypeCtx, ty: AlgType, *, strict: bool = False) -> None:
    """Arity and sort of every argument; with ``strict`` also dependent
    type-argument agreement."""
    tc = gat.typecon(ty.head)
    for v in free_vars(ty):
        ctx.type_of(v)
    if strict:
        solve_args(gat, ctx, tc, ty.args, strict=True)
    else:
        _check_arg_sorts(gat, ctx, tc, ty.args, "type")


def check_term(gat: GAT, ctx: TypeCtx, t: AlgTerm, *, strict: bool = False) -> AlgSort:
    """Recursively sort-check (or, strictly, type-check) a term."""
    if isinstance(t, Var):
        return AlgSort(ctx.type_of(t.id).head)
    tc = gat.termcon(t.head)
    for a in t.args:
        check_term(gat, ctx, a, strict=strict)
    if strict:
        infer_type(gat, ctx, t, strict=True)
    else:
        _check_arg_sorts(gat, ctx, tc, t.args, "term")
    return AlgSort(tc.type.head)


def check_context(gat: GAT, ctx: TypeCtx, *, strict: bool = False) -> None:
    """Raise on the first ill-formed binding; errors carry ``position``."""
    for pos, (ident, ty) in enumerate(ctx, start=1):
        try:
            if not isinstance(ty, AlgType):
                raise UnknownConstructor(f"binding {ident.name} has no type")
            for v in free_vars(ty):
                if v.tag == ctx.tag:
                    if v.index >= pos:
                        raise ForwardReference(
                            f"{v.name} is used in the type of {ident.name} before it is introduced",
                            position=pos,
                        )
                else:
                    raise UnboundVariable(f"{v.name} is not bound in the context")
            check_type(gat, ctx, ty, strict=strict)
        except GatError as e:
            if not hasattr(e, "position") or getattr(e, "position", None) is None:
                e.position = pos
            raise


def check_judgment(gat: GAT, j, *, strict: bool = False) -> None:
    """Validate one judgment against ``gat`` (which must contain its dependencies)."""
    check_context(gat, j.localcontext, strict=strict)
    if isinstance(j, (TypeConstructor, TermConstructor)):
        if len(set(j.args)) != len(j.args):
            raise ArityMismatch(f"{j.name} lists an argument twice")
        for a in j.args:
            j.localcontext.type_of(a)
    if isinstance(j, TermConstructor):
        check_type(gat, j.localcontext, j.type, strict=strict)
    if isinstance(j, Axiom):
        ls = check_term(gat, j.localcontext, j.lhs, strict=strict)
        rs = check_term(gat, j.localcontext, j.rhs, strict=strict)
        if ls != rs:
            raise SortMismatch(
                f"axiom {j.name or ''} relates sort {_name(gat, ls.head)} to sort {_name(gat, rs.head)}"
            )
        if ls != j.sort:
            raise SortMismatch(f"axiom {j.name or ''} declares the wrong sort")


def check_theory(gat: GAT, *, strict: bool = False) -> list[GatError]:
    """Every judgment checked against the theory; returns the errors found."""
    errors = []
    for ident, j in gat.judgments():
        try:
            check_judgment(gat, j, strict=strict)
        except GatError as e:
            e.message = f"{j.name or 'axiom'}: {e.message}"
            errors.append(e)
    return errors


# ---------------------------------------------------------------------------
# generic terms and alpha-equivalence

def generic_term(gat: GAT, ident: Ident) -> TermInCtx:
    tc = gat.termcon(ident)
    return TermInCtx(tc.localcontext, App(ident.renamed(tc.name), tuple(Var(a) for a in tc.args)))


def generic_type(gat: GAT, ident: Ident) -> TypeInCtx:
    tc = gat.typecon(ident)
    return TypeInCtx(tc.localcontext, AlgType(ident.renamed(tc.name), tuple(Var(a) for a in tc.args)))


Key = Callable[[Ident], object]


def canon(t, key: Key):
    """Hashable structure of a term/type with idents replaced by ``key``."""
    if isinstance(t, Var):
        return ("v", key(t.id))
    if isinstance(t, App):
        return ("a", key(t.head), tuple(canon(a, key) for a in t.args))
    if isinstance(t, AlgType):
        return ("t", key(t.head), tuple(canon(a, key) for a in t.args))
    raise TypeError(f"cannot canonicalize {t!r}")


def ctx_key(ctx: TypeCtx, outer: Key | None = None) -> Key:
    tag = ctx.tag

    def key(i: Ident):
        if i.tag == tag:
            return ("ctx", i.index)
        if outer is not None:
            return outer(i)
        return ("raw", i.tag.raw, i.index)

    return key


def canon_ctx(ctx: TypeCtx, outer: Key | None = None):
    key = ctx_key(ctx, outer)
    return tuple(canon(ty, key) for _, ty in ctx)


def canon_in_ctx(x, outer: Key | None = None):
    key = ctx_key(x.ctx, outer)
    body = x.term if isinstance(x, TermInCtx) else x.type
    return (canon_ctx(x.ctx, outer), canon(body, key))


def alpha_equal(a, b) -> bool:
    """Alpha-equality of two :class:`TermInCtx` (or :class:`TypeInCtx`)."""
    if type(a) is not type(b):
        return False
    if len(a.ctx) != len(b.ctx):
        return False
    return canon_in_ctx(a) == canon_in_ctx(b)


def theory_key(gat: GAT, outer: Key | None = None) -> Key:
    def key(i: Ident):
        if i in gat:
            return ("thy", gat.position(i))
        if outer is not None:
            return outer(i)
        return ("raw", i.tag.raw, i.index)

    return key


def canon_judgment(gat: GAT, j, key: Key | None = None, *, with_name: bool = True):
    k = key or theory_key(gat)
    inner = ctx_key(j.localcontext, k)
    head = (type(j).__name__, j.name if with_name else None, canon_ctx(j.localcontext, k))
    if isinstance(j, TypeConstructor):
        return head + (tuple(inner(a) for a in j.args),)
    if isinstance(j, TermConstructor):
        return head + (tuple(inner(a) for a in j.args), canon(j.type, inner))
    return head + (k(j.sort.head), canon(j.lhs, inner), canon(j.rhs, inner))


def canon_gat(gat: GAT):
    key = theory_key(gat)
    judgments = tuple(canon_judgment(gat, j, key) for _, j in gat.judgments())
    policy = (
        tuple(sorted(key(i) for i in gat.policy.assoc)),
        tuple(sorted((key(o), key(u)) for o, u in gat.policy.units)),
    )
    return judgments, tuple(sorted(gat.aliases)), policy


def alpha_equal_gat(a: GAT, b: GAT) -> bool:
    """Same judgments in the same order, up to tags and variable names."""
    return canon_gat(a) == canon_gat(b)


# ---------------------------------------------------------------------------
# normalization

def _flatten(t: AlgTerm, op: Ident) -> list[AlgTerm]:
    if isinstance(t, App) and t.head == op and len(t.args) == 2:
        return _flatten(t.args[0], op) + _flatten(t.args[1], op)
    return [t]


def _is_unit(t: AlgTerm, unit: Ident | None) -> bool:
    return unit is not None and isinstance(t, App) and t.head == unit


def normalize(t: AlgTerm, policy: NormalizationPolicy) -> AlgTerm:
    """Bottom-up: flatten declared associative operations into left-nested
    chains and delete declared units."""
    if isinstance(t, Var) or not t.args:
        return t
    args = tuple(normalize(a, policy) for a in t.args)
    op = t.head
    unit = policy.unit_of(op)
    if len(args) == 2 and (op in policy.assoc or unit is not None):
        parts = _flatten(App(op, args), op) if op in policy.assoc else list(args)
        kept = [p for p in parts if not _is_unit(p, unit)]
        if not kept:
            return parts[0]
        if len(kept) == 1:
            return kept[0]
        acc = kept[0]
        for p in kept[1:]:
            acc = App(op, (acc, p))
        return acc
    return App(op, args)


def equal_upto_norm(gat: GAT, ctx: TypeCtx, t1: AlgTerm, t2: AlgTerm,
                    policy: NormalizationPolicy | None = None) -> bool:
    """Sound, incomplete equality: ``True`` means provable under the policy."""
    pol = gat.policy if policy is None else policy
    return normalize(t1, pol) == normalize(t2, pol)
