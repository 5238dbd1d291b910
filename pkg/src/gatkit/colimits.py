"""Renaming, inclusions, pushouts of simple spans, and ``using`` lowering."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping

from .errors import IncompatibleIdentification, NameCollision, NotAnInclusion, UnknownName
from .kernel import canon_judgment
from .morphisms import IdMap, InclMap, SimpleMap, TheoryMap, image_ident
from .scopes import Binding, Ident, Scope, ScopeList, fresh_tag, map_idents
from .syntax import GAT, Axiom, judgment_binding


@dataclass(frozen=True)
class Span:
    apex: GAT
    left: TheoryMap
    right: TheoryMap


EMPTY = GAT("ThEmpty")


def _constructor_names(g: GAT) -> set[str]:
    return {j.name for _, j in g.constructors()}


def rename_theory(g: GAT, renames: Mapping[str, str], name: str | None = None) -> tuple[GAT, SimpleMap]:
    """A copy of ``g`` with fresh tags and constructors renamed; returns the
    copy and the isomorphism ``g → copy``."""
    renames = dict(renames)
    existing = _constructor_names(g)
    for old in renames:
        if old not in existing:
            raise UnknownName(f"{g.name} has no constructor named {old!r}")
    if len(set(renames.values())) != len(renames):
        raise NameCollision("renaming is not injective")
    kept = existing - set(renames)
    for old, new in renames.items():
        if new in kept and new != old:
            raise NameCollision(f"cannot rename {old} to {new}: {new} already exists in {g.name}")

    tagmap = {s.tag: fresh_tag() for s in g.segments}

    def on_ident(i: Ident) -> Ident:
        if i.tag in tagmap:
            return Ident(tagmap[i.tag], i.index, renames.get(i.name, i.name))
        return i

    scopes = []
    for s in g.segments:
        bindings = []
        for b in s.bindings:
            j = map_idents(b.payload, on_ident)
            if j.name is not None and not isinstance(j, Axiom):
                j = dataclasses.replace(j, name=renames.get(j.name, j.name))
            bindings.append(judgment_binding(j))
        scopes.append(Scope(tagmap[s.tag], tuple(bindings)))
    aliases = tuple((sym, renames.get(n, n)) for sym, n in g.aliases)
    policy = map_idents(g.policy, on_ident)
    out = GAT(name or g.name, ScopeList(tuple(scopes)), aliases, policy)
    typemap = {i: on_ident(i) for i, _ in g.typecons()}
    termmap = {i: on_ident(i) for i, _ in g.termcons()}
    return out, SimpleMap(g, out, typemap, termmap, f"rename({g.name})")


def inclusion_map(sub: GAT, sup: GAT) -> InclMap:
    """The inclusion of ``sub`` into ``sup`` when every segment of ``sub`` is
    a segment of ``sup``."""
    missing = []
    for s in sub.segments:
        if not sup.segments.has_tag(s.tag) or sup.segments.scope(s.tag) != s:
            missing += [b.name or "axiom" for b in s.bindings]
    if missing:
        raise NotAnInclusion(f"{sub.name} is not included in {sup.name}: missing {', '.join(missing)}")
    return InclMap(sub, sup, f"incl({sub.name},{sup.name})")


def common_prefix(a: GAT, b: GAT, name: str = "overlap") -> GAT:
    """The leading segments ``a`` and ``b`` share (same tag, same content)."""
    shared = []
    for sa, sb in zip(a.segments, b.segments):
        if sa.tag != sb.tag or sa != sb:
            break
        shared.append(sa)
    return GAT(name, ScopeList(tuple(shared)), (), _restrict_policy(a, shared))


def _restrict_policy(g: GAT, scopes):
    from .syntax import NormalizationPolicy

    tags = {s.tag for s in scopes}
    return NormalizationPolicy(
        frozenset(i for i in g.policy.assoc if i.tag in tags),
        tuple((op, u) for op, u in g.policy.units if op.tag in tags),
    )


def pushout_simple(span: Span, name: str | None = None) -> tuple[GAT, InclMap, SimpleMap]:
    """Glue ``L`` and ``R`` along the apex.

    The result keeps every segment of ``L`` and appends, in fresh segments,
    the judgments of ``R`` not identified with something in ``L``.
    """
    apex, left, right = span.apex, span.left, span.right
    L, R = left.codom, right.codom
    ident_map: dict[Ident, Ident] = {}
    for c, _ in apex.constructors():
        li, ri = image_ident(left, c), image_ident(right, c)
        if ri in ident_map and ident_map[ri] != li:
            raise IncompatibleIdentification(f"{ri.name} would be identified with two constructors")
        ident_map[ri] = li

    def on_ident(i: Ident) -> Ident:
        return ident_map.get(i, i)

    for ri, li in ident_map.items():
        if ri == li:
            continue
        rj = map_idents(R.judgment(ri), on_ident)
        lj = L.judgment(li)
        if canon_judgment(L, rj, with_name=False) != canon_judgment(L, lj, with_name=False):
            raise IncompatibleIdentification(f"{R.display(ri)} and {L.display(li)} differ in structure")

    segments = list(L.segments)
    current = GAT(name or L.name, ScopeList(tuple(segments)), L.aliases, L.policy)
    existing_axioms = {canon_judgment(current, j, with_name=False) for _, j in L.axioms()}
    for s in R.segments:
        if L.segments.has_tag(s.tag) and L.segments.scope(s.tag) == s:
            continue
        tag = fresh_tag()
        bindings = []
        pending: dict[Ident, Ident] = {}
        for k, b in enumerate(s.bindings, start=1):
            old = Ident(s.tag, k, b.name)
            if old in ident_map:
                continue
            new = Ident(tag, len(bindings) + 1, b.name)
            pending[old] = new
            ident_map[old] = new
            j = map_idents(b.payload, on_ident)
            if isinstance(j, Axiom):
                partial = GAT(current.name, current.segments.push(Scope(tag, tuple(bindings)))
                              if bindings else current.segments)
                key = canon_judgment(partial, j, with_name=False)
                if key in existing_axioms:
                    del ident_map[old]
                    continue
                existing_axioms.add(key)
            bindings.append(judgment_binding(j))
        if bindings:
            segments.append(Scope(tag, tuple(bindings)))
            current = GAT(current.name, ScopeList(tuple(segments)), current.aliases, current.policy)
    aliases = list(L.aliases)
    for a in R.aliases:
        if a not in aliases:
            aliases.append(a)
    policy = L.policy.merge(map_idents(R.policy, on_ident))
    P = GAT(name or L.name, ScopeList(tuple(segments)), tuple(aliases), policy)
    lleg = InclMap(L, P, f"{L.name}→{P.name}")
    typemap = {i: on_ident(i) for i, _ in R.typecons()}
    termmap = {i: on_ident(i) for i, _ in R.termcons()}
    rleg = SimpleMap(R, P, typemap, termmap, f"{R.name}→{P.name}")
    return P, lleg, rleg


def coproduct_span(L: GAT, R: GAT) -> Span:
    return Span(EMPTY, InclMap(EMPTY, L), InclMap(EMPTY, R))


def extend_with_using(name: str, clauses, parent: GAT | None = None) -> GAT:
    """Lower ``using T: a as b, ...`` clauses.

    Each clause's theory is renamed (when asked), then glued onto what came
    before along their shared leading segments — the empty theory when they
    share nothing.
    """
    acc = parent
    for theory, renames in clauses:
        t = rename_theory(theory, renames)[0] if renames else theory
        if acc is None:
            acc = t
            continue
        apex = common_prefix(acc, t)
        acc, _, _ = pushout_simple(Span(apex, inclusion_map(apex, acc), inclusion_map(apex, t)), name)
    if acc is None:
        return GAT(name)
    return GAT(name, acc.segments, acc.aliases, acc.policy)


def identity_span(g: GAT) -> Span:
    return Span(g, IdMap(g), IdMap(g))
