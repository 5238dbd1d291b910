"""Canonical JSON for theories, maps and terms in context.

Tags are renumbered 1..n in first-occurrence order before writing, so the
output is deterministic; loading maps document tags to fresh ones.
"""

from __future__ import annotations

import json

from ..errors import MalformedDocument
from ..scopes import Binding, Ident, Scope, ScopeList, ScopeTag, canonical_tags, fresh_tag, retag
from ..syntax import (
    GAT,
    AlgSort,
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
    judgment_binding,
)

FORMAT = "gatkit/1"


# -- encoding ---------------------------------------------------------------

def _id(i: Ident):
    return [i.tag.raw, i.index, i.name]


def _term(t):
    if isinstance(t, Var):
        return {"var": _id(t.id)}
    return {"app": _id(t.head), "args": [_term(a) for a in t.args]}


def _type(ty: AlgType):
    return {"head": _id(ty.head), "args": [_term(a) for a in ty.args]}


def _ctx(ctx: TypeCtx):
    return {"tag": ctx.tag.raw, "bindings": [{"name": n, "type": _type(t)} for n, t in zip(ctx.names(), ctx.types())]}


def _judgment(j):
    d = {"name": j.name, "context": _ctx(j.localcontext)}
    if isinstance(j, TypeConstructor):
        d.update(kind="typecon", args=[a.index for a in j.args])
    elif isinstance(j, TermConstructor):
        d.update(kind="termcon", args=[a.index for a in j.args], type=_type(j.type))
    else:
        d.update(kind="axiom", sort=_id(j.sort.head), lhs=_term(j.lhs), rhs=_term(j.rhs))
    return d


def _theory(g: GAT):
    return {
        "kind": "theory",
        "name": g.name,
        "segments": [
            {"tag": s.tag.raw, "bindings": [{"name": b.name, "judgment": _judgment(b.payload)} for b in s.bindings]}
            for s in g.segments
        ],
        "aliases": [[s, n] for s, n in g.aliases],
        "policy": {
            "assoc": sorted((_id(i) for i in g.policy.assoc), key=lambda x: (x[0], x[1])),
            "units": [[_id(o), _id(u)] for o, u in g.policy.units],
        },
    }


def _map(m):
    from ..morphisms import GeneralMap, IdMap, InclMap, SimpleMap, kind_name

    d = {"kind": "map", "map_kind": kind_name(m), "name": m.name,
         "dom": _theory(m.dom), "codom": _theory(m.codom)}
    if isinstance(m, SimpleMap):
        d["typemap"] = [[_id(k), _id(v)] for k, v in m.typemap.items()]
        d["termmap"] = [[_id(k), _id(v)] for k, v in m.termmap.items()]
    elif isinstance(m, GeneralMap):
        d["typemap"] = [[_id(k), {"context": _ctx(v.ctx), "type": _type(v.type)}] for k, v in m.typemap.items()]
        d["termmap"] = [[_id(k), {"context": _ctx(v.ctx), "term": _term(v.term)}] for k, v in m.termmap.items()]
    elif not isinstance(m, (IdMap, InclMap)):
        raise TypeError(f"not a map: {m!r}")
    return d


def to_data(x, gat: GAT | None = None) -> dict:
    from ..morphisms import GeneralMap, IdMap, InclMap, SimpleMap

    if isinstance(x, (TermInCtx, TypeInCtx)):
        bundle = (gat, x) if gat is not None else (x,)
        canon = retag(bundle, canonical_tags(bundle))
        y = canon[-1]
        d = {"kind": "term" if isinstance(x, TermInCtx) else "type", "context": _ctx(y.ctx)}
        if isinstance(y, TermInCtx):
            d["term"] = _term(y.term)
        else:
            d["type"] = _type(y.type)
        if gat is not None:
            d["theory"] = _theory(canon[0])
        return {"format": FORMAT, **d}
    x = retag(x, canonical_tags(x))
    if isinstance(x, GAT):
        return {"format": FORMAT, **_theory(x)}
    if isinstance(x, (IdMap, InclMap, SimpleMap, GeneralMap)):
        return {"format": FORMAT, **_map(x)}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_json(x, gat: GAT | None = None, *, indent: int | None = 2) -> str:
    return json.dumps(to_data(x, gat), ensure_ascii=False, indent=indent)


# -- decoding ---------------------------------------------------------------

class _Decoder:
    def __init__(self, gat: GAT | None = None):
        self.tags: dict[int, ScopeTag] = {}
        self.scopes: dict[int, int] = {}
        self.gat = gat

    def external(self, raw, index, name) -> bool:
        """Bind document scope ``raw`` to the segment of ``self.gat`` whose
        ``index``-th binding is called ``name``."""
        if self.gat is None:
            return False
        for s in self.gat.segments:
            if index <= len(s) and s[index].name == name:
                self.tags[raw] = s.tag
                self.scopes[raw] = len(s)
                return True
        return False

    def fail(self, path, msg):
        raise MalformedDocument(msg, path=tuple(str(p) for p in path))

    def get(self, d, key, path, typ=None):
        if not isinstance(d, dict) or key not in d:
            self.fail(path, f"missing field {key!r}")
        v = d[key]
        if typ is not None and not isinstance(v, typ):
            self.fail(path + (key,), f"expected {typ.__name__ if isinstance(typ, type) else 'value'}")
        return v

    def tag(self, raw, path) -> ScopeTag:
        if not isinstance(raw, int) or isinstance(raw, bool):
            self.fail(path, "tag must be an integer")
        if raw not in self.tags:
            self.tags[raw] = fresh_tag()
        return self.tags[raw]

    def ident(self, x, path) -> Ident:
        if not (isinstance(x, list) and len(x) == 3 and isinstance(x[1], int) and isinstance(x[2], str)):
            self.fail(path, "identifier must be [tag, index, name]")
        raw, index, name = x
        if raw not in self.scopes and not self.external(raw, index, name):
            self.fail(path, f"identifier {name!r} refers to unknown scope {raw}")
        if not 1 <= index <= self.scopes[raw]:
            self.fail(path, f"identifier {name!r} has index {index} outside its scope of length {self.scopes[raw]}")
        return Ident(self.tag(raw, path), index, name)

    def term(self, d, path):
        if isinstance(d, dict) and "var" in d:
            return Var(self.ident(d["var"], path + ("var",)))
        head = self.ident(self.get(d, "app", path), path + ("app",))
        args = self.get(d, "args", path, list)
        return App(head, tuple(self.term(a, path + ("args", k)) for k, a in enumerate(args)))

    def type(self, d, path) -> AlgType:
        head = self.ident(self.get(d, "head", path), path + ("head",))
        args = self.get(d, "args", path, list)
        return AlgType(head, tuple(self.term(a, path + ("args", k)) for k, a in enumerate(args)))

    def ctx(self, d, path) -> TypeCtx:
        raw = self.get(d, "tag", path)
        tag = self.tag(raw, path + ("tag",))
        bindings = self.get(d, "bindings", path, list)
        self.scopes[raw] = len(bindings)
        entries = []
        for k, b in enumerate(bindings):
            p = path + ("bindings", k)
            entries.append((self.get(b, "name", p, str), self.type(self.get(b, "type", p), p + ("type",))))
        return TypeCtx.build(tag, entries)

    def judgment(self, d, path):
        kind = self.get(d, "kind", path, str)
        name = d.get("name")
        ctx = self.ctx(self.get(d, "context", path), path + ("context",))

        def args():
            raw = self.get(d, "args", path, list)
            out = []
            for k, i in enumerate(raw):
                if not isinstance(i, int) or not 1 <= i <= len(ctx):
                    self.fail(path + ("args", k), f"argument index {i} outside the context")
                out.append(ctx.ident(i))
            return tuple(out)

        if kind == "typecon":
            return TypeConstructor(name, ctx, args())
        if kind == "termcon":
            return TermConstructor(name, ctx, args(), self.type(self.get(d, "type", path), path + ("type",)))
        if kind == "axiom":
            sort = AlgSort(self.ident(self.get(d, "sort", path), path + ("sort",)))
            lhs = self.term(self.get(d, "lhs", path), path + ("lhs",))
            rhs = self.term(self.get(d, "rhs", path), path + ("rhs",))
            return Axiom(name, ctx, sort, lhs, rhs)
        self.fail(path + ("kind",), f"unknown judgment kind {kind!r}")

    def theory(self, d, path) -> GAT:
        name = self.get(d, "name", path, str)
        segs = self.get(d, "segments", path, list)
        for k, s in enumerate(segs):
            raw = self.get(s, "tag", path + ("segments", k))
            self.tag(raw, path + ("segments", k, "tag"))
            self.scopes[raw] = len(self.get(s, "bindings", path + ("segments", k), list))
        scopes = []
        for k, s in enumerate(segs):
            p = path + ("segments", k)
            bindings = []
            for n, b in enumerate(s["bindings"]):
                j = self.judgment(self.get(b, "judgment", p + ("bindings", n)), p + ("bindings", n, "judgment"))
                bindings.append(judgment_binding(j))
            scopes.append(Scope(self.tags[s["tag"]], tuple(bindings)))
        aliases = tuple(tuple(a) for a in d.get("aliases", []))
        pol = d.get("policy", {}) or {}
        assoc = frozenset(self.ident(x, path + ("policy", "assoc")) for x in pol.get("assoc", []))
        units = tuple((self.ident(o, path + ("policy", "units")), self.ident(u, path + ("policy", "units")))
                      for o, u in pol.get("units", []))
        return GAT(name, ScopeList(tuple(scopes)), aliases, NormalizationPolicy(assoc, units))

    def map(self, d, path):
        from ..morphisms import GeneralMap, IdMap, InclMap, SimpleMap

        kind = self.get(d, "map_kind", path, str)
        name = self.get(d, "name", path, str)
        dom = self.theory(self.get(d, "dom", path), path + ("dom",))
        codom = self.theory(self.get(d, "codom", path), path + ("codom",))
        if kind == "IdMap":
            return IdMap(dom, name)
        if kind == "InclMap":
            return InclMap(dom, codom, name)
        if kind == "SimpleMap":
            tm = {self.ident(k, path + ("typemap",)): self.ident(v, path + ("typemap",)) for k, v in d["typemap"]}
            em = {self.ident(k, path + ("termmap",)): self.ident(v, path + ("termmap",)) for k, v in d["termmap"]}
            return SimpleMap(dom, codom, tm, em, name)
        if kind == "GeneralMap":
            tm, em = {}, {}
            for k, (key, v) in enumerate(self.get(d, "typemap", path, list)):
                p = path + ("typemap", k)
                ctx = self.ctx(self.get(v, "context", p), p + ("context",))
                tm[self.ident(key, p)] = TypeInCtx(ctx, self.type(self.get(v, "type", p), p + ("type",)))
            for k, (key, v) in enumerate(self.get(d, "termmap", path, list)):
                p = path + ("termmap", k)
                ctx = self.ctx(self.get(v, "context", p), p + ("context",))
                em[self.ident(key, p)] = TermInCtx(ctx, self.term(self.get(v, "term", p), p + ("term",)))
            return GeneralMap(dom, codom, tm, em, name)
        self.fail(path + ("map_kind",), f"unknown map kind {kind!r}")


def from_data(d, gat: GAT | None = None):
    """Decode a document. A term or type written without its theory has
    constructor references resolved against ``gat``."""
    dec = _Decoder(gat)
    if not isinstance(d, dict):
        raise MalformedDocument("document must be an object")
    kind = dec.get(d, "kind", (), str)
    if kind == "theory":
        return dec.theory(d, ())
    if kind == "map":
        return dec.map(d, ())
    if kind in ("term", "type"):
        gat = dec.theory(d["theory"], ("theory",)) if "theory" in d else None
        ctx = dec.ctx(dec.get(d, "context", ()), ("context",))
        if kind == "term":
            x = TermInCtx(ctx, dec.term(dec.get(d, "term", ()), ("term",)))
        else:
            x = TypeInCtx(ctx, dec.type(dec.get(d, "type", ()), ("type",)))
        return (x, gat) if gat is not None else x
    dec.fail(("kind",), f"unknown document kind {kind!r}")


def from_json(text: str, gat: GAT | None = None):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"invalid JSON: {e.msg} at line {e.lineno}") from None
    return from_data(d, gat)
