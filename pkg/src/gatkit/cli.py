"""Command-line front end.

Exit codes: 0 success, 1 well-formed input with a negative verdict,
2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .colimits import Span, pushout_simple
from .errors import GatError, GatSyntaxError, MalformedDocument, TheoryMismatch, UnknownTheory
from .kernel import alpha_equal_gat, check_theory, infer_sort, infer_type
from .models import DEFAULT_BOUND, CheckError, Model, check_axioms, eval_term
from .morphisms import (
    GeneralMap,
    SimpleMap,
    check_simple_validity,
    check_welltyped,
    kind_name,
    migrate_model,
    pushforward,
)
from .stdlib import LibraryError, build_model, library_path, load_files, load_library
from .surface import Registry, load_source, parse_term, parse_type, pretty, show_type
from .surface.serialize import to_data, to_json
from .syntax import TypeInCtx

OK, FAIL, USAGE = 0, 1, 2


class UsageError(GatError):
    pass


_USAGE_ERRORS = (UsageError, GatSyntaxError, MalformedDocument, UnknownTheory, LibraryError)


# -- helpers ----------------------------------------------------------------

def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, ensure_ascii=False, indent=2))
    elif text:
        print(text)


def _error_data(e: Exception) -> dict:
    d = {"kind": type(e).__name__, "message": getattr(e, "message", str(e))}
    span = getattr(e, "span", None)
    if span is not None:
        d["span"] = list(span)
    if isinstance(e, CheckError):
        d["chain"] = e.to_dict()
    if isinstance(e, MalformedDocument):
        d["path"] = list(e.path)
    return d


def _registry(args) -> Registry:
    reg = load_library(check_models=False)[0]
    for d in library_path():
        load_files(reg, sorted(Path(d).glob("*.gat")))
    for f in getattr(args, "load", None) or []:
        load_files(reg, [f])
    return reg


def _lookup(reg: Registry, kind: str, name: str):
    if name not in reg or reg.kind(name) != kind:
        known = ", ".join(reg.names(kind))
        raise UsageError(f"no {kind} named {name!r} (known: {known})")
    return reg.get(name)


def _params(items) -> dict[str, str]:
    out = {}
    for item in _flatten(items):
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _flatten(items):
    for x in items or []:
        if isinstance(x, list):
            yield from x
        else:
            yield x


def _recover_positionals(args) -> None:
    """Greedy ``nargs="+"`` options (``--param n=7 "x⋅y ⊣ [x,y]"``) swallow
    the positionals after them; move items that are not ``key=value`` back."""
    slots = [k for k in ("action", "term") if hasattr(args, k) and getattr(args, k) is None]
    for attr in ("param", "bind", "enum"):
        for group in getattr(args, attr, None) or []:
            for item in list(group):
                if "=" not in item and slots:
                    group.remove(item)
                    setattr(args, slots.pop(0), item)


def _model(reg: Registry, name: str, params) -> Model:
    spec = _lookup(reg, "model", name)
    return spec.build(reg, **_params(params))


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts]


def _enumerators(model: Model, items) -> dict:
    """``TYPE=a..b`` (inclusive integer range) or ``TYPE=v1,v2,...``."""
    out = {}
    for k, spec in _params(items).items():
        try:
            ty = model.theory.resolve(k, kind="type")
        except GatError:
            raise UsageError(f"{model.theory.name} has no type constructor {k!r}") from None
        if ".." in spec and not spec.startswith("["):
            lo, hi = spec.split("..", 1)
            try:
                out[ty] = range(int(lo), int(hi) + 1)
            except ValueError:
                raise UsageError(f"bad range {spec!r}") from None
        else:
            out[ty] = [model.literal(ty, v) for v in _split_top(spec)]
    return out


def _bindings(model: Model, ctx, items) -> dict:
    given = _params(items)
    names = ctx.names()
    extra = set(given) - set(names)
    if extra:
        raise UsageError(f"no variable(s) {', '.join(sorted(extra))} in the context")
    env = {}
    for ident, ty in ctx:
        if ident.name not in given:
            raise UsageError(f"no value bound for {ident.name} (use --bind {ident.name}=...)")
        tyargs = [eval_term(model, env, a) for a in ty.args]
        env[ident] = model.coerce(ty.head, model.literal(ty.head, given[ident.name]), tyargs)
    return env


def _bound(args, default_exhaustive: bool):
    if args.exhaustive:
        return None
    if args.bound is not None:
        return args.bound
    return None if default_exhaustive else DEFAULT_BOUND


# -- commands ---------------------------------------------------------------

def _check_entity(reg: Registry, name: str, source: str | None) -> dict:
    kind = reg.kind(name)
    entity = reg.get(name)
    diags: list[str] = []
    extra = {}
    if kind == "theory":
        diags = [str(e) for e in check_theory(entity)]
    elif kind == "map":
        found = check_welltyped(entity)
        if not found and isinstance(entity, SimpleMap):
            found = check_simple_validity(entity)
        diags = [str(d) for d in found]
        extra["map_kind"] = kind_name(entity)
    else:
        try:
            model = entity.build(reg)
            report = check_axioms(model)
            diags = [f"{r.name}: counterexample {r.env}" for r in report.counterexamples]
        except GatError as e:
            diags = [str(e)]
    expected = name in reg.expected_invalid
    ok = not diags or expected
    return {"name": name, "kind": kind, "source": source, "ok": ok,
            "expected_invalid": expected, "diagnostics": diags, **extra}


def cmd_check(args) -> int:
    targets = args.files or ["stdlib"]
    results: list[dict] = []
    code = OK
    for target in targets:
        if target == "stdlib":
            reg, index = load_library(check_models=False)
            results += [_check_entity(reg, e.name, e.source) for e in index.entries]
            continue
        base = load_library(check_models=False)[0]
        reg = Registry()
        for n, th in base.items("theory"):
            reg.add(n, th, source=base.sources.get(n))
        path = Path(target)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {target}: {e.strerror}") from None
        try:
            decls = load_source(text, reg, str(path))
        except GatError as e:
            results.append({"name": str(path), "kind": "file", "source": str(path), "ok": False,
                            "expected_invalid": False, "diagnostics": [f"{path}: {e}"],
                            "error": _error_data(e)})
            code = max(code, USAGE if isinstance(e, _USAGE_ERRORS) else FAIL)
            continue
        results += [_check_entity(reg, n, str(path)) for n, _ in decls]
    if any(not r["ok"] for r in results):
        code = max(code, FAIL)
    lines = []
    for r in results:
        status = "ok" if not r["diagnostics"] else ("expected-invalid" if r["expected_invalid"] else "FAIL")
        lines.append(f"{status:16} {r['name']} ({r['kind']})")
        lines += [f"    {d}" for d in r["diagnostics"]]
    failed = sum(not r["ok"] for r in results)
    lines.append(f"{len(results)} checked, {failed} failed")
    _emit(args, "\n".join(lines), {"ok": code == OK, "results": results})
    return code


def cmd_sort(args) -> int:
    reg = _registry(args)
    gat = _lookup(reg, "theory", args.theory)
    tic = parse_term(args.term, gat)
    sort = infer_sort(gat, tic.ctx, tic.term)
    ty = infer_type(gat, tic.ctx, tic.term, strict=False)
    name = gat.display(sort.head)
    text = pretty(TypeInCtx(tic.ctx, ty), gat) if args.full else name
    _emit(args, text, {"theory": gat.name, "sort": name, "type": show_type(gat, ty)})
    return OK


def cmd_apply(args) -> int:
    reg = _registry(args)
    m = _lookup(reg, "map", args.map)
    if args.theory is not None:
        th = _lookup(reg, "theory", args.theory)
        if not alpha_equal_gat(th, m.dom):
            raise UsageError(f"map {args.map} goes from {m.dom.name}, not {args.theory}")
    try:
        x = parse_type(args.term, m.dom) if args.type else parse_term(args.term, m.dom)
    except GatSyntaxError:
        raise
    except GatError as e:
        raise UsageError(f"input is not a {'type' if args.type else 'term'} of {m.dom.name}: {e}") from None
    out = pushforward(m, x)
    text = pretty(out, m.codom)
    _emit(args, text, {"map": args.map, "kind": kind_name(m), "input": pretty(x, m.dom),
                       "output": text, "document": to_data(out, m.codom)})
    return OK


def _eval(args, model: Model) -> int:
    if not args.term:
        raise UsageError("eval needs a term")
    tic = parse_term(args.term, model.theory)
    env = _bindings(model, tic.ctx, args.bind)
    value = eval_term(model, env, tic.term)
    shown = model.show(value)
    _emit(args, shown, {"model": model.name, "theory": model.theory.name,
                        "term": pretty(tic, model.theory), "value": shown})
    return OK


def _axioms(args, model: Model) -> int:
    enums = _enumerators(model, args.enum)
    report = check_axioms(model, enums, _bound(args, default_exhaustive=bool(enums)))
    _emit(args, report.to_text(model.show), report.to_dict(model.show))
    return OK if report.ok else FAIL


def cmd_eval(args) -> int:
    reg = _registry(args)
    return _eval(args, _model(reg, args.model, args.param))


def cmd_axioms(args) -> int:
    reg = _registry(args)
    return _axioms(args, _model(reg, args.model, args.param))


def cmd_migrate(args) -> int:
    reg = _registry(args)
    m = _lookup(reg, "map", args.map)
    mb = _model(reg, args.model, args.param)
    if not alpha_equal_gat(m.codom, mb.theory):
        raise TheoryMismatch(f"map {args.map} lands in {m.codom.name} but {args.model} models {mb.theory.name}")
    ma = migrate_model(m, mb, f"{args.map}*{args.model}")
    if args.action == "eval":
        return _eval(args, ma)
    if args.action == "axioms":
        return _axioms(args, ma)
    ops = [ma.theory.display(i) for i, _ in ma.theory.termcons()]
    _emit(args, f"{ma.name} : {ma.theory.name} (operations: {', '.join(ops)})",
          {"model": ma.name, "theory": ma.theory.name, "operations": ops})
    return OK


def cmd_pushout(args) -> int:
    reg = _registry(args)
    f = _lookup(reg, "map", args.left)
    g = _lookup(reg, "map", args.right)
    for m in (f, g):
        if isinstance(m, GeneralMap):
            raise UsageError(f"{m.name} is a general map; pushouts need simple maps")
    if not alpha_equal_gat(f.dom, g.dom):
        raise TheoryMismatch(f"{args.left} and {args.right} have different domains")
    name = args.name or f"{f.codom.name}+{g.codom.name}"
    P, _, _ = pushout_simple(Span(f.dom, f, g), name)
    text = pretty(P)
    if args.out:
        out = Path(args.out)
        out.write_text(to_json(P) if out.suffix == ".json" else text + "\n", encoding="utf-8")
    _emit(args, text, to_data(P))
    return OK


def cmd_list(args) -> int:
    reg, index = load_library(check_models=False)
    entries = [e for e in index.entries if args.kind is None or e.kind == args.kind.rstrip("s")]
    text = "\n".join(f"{e.kind:7} {e.name:24} {e.source}" for e in entries)
    _emit(args, text, [{"name": e.name, "kind": e.kind, "source": e.source} for e in entries])
    return OK


def cmd_export(args) -> int:
    reg = _registry(args)
    if args.name not in reg or reg.kind(args.name) == "model":
        raise UsageError(f"no theory or map named {args.name!r}")
    text = to_json(reg.get(args.name))
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--load", action="append", metavar="FILE", help="extra .gat file to load")
    # the same options after the subcommand; SUPPRESS keeps values given before it
    local = argparse.ArgumentParser(add_help=False)
    local.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    local.add_argument("--load", action="append", metavar="FILE", default=argparse.SUPPRESS,
                       help="extra .gat file to load")

    p = argparse.ArgumentParser(prog="gatkit", description="Work with generalized algebraic theories.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[local], help="check .gat files, or 'stdlib'")
    s.add_argument("files", nargs="*")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("sort", parents=[local], help="infer the sort of a term in context")
    s.add_argument("--theory", required=True)
    s.add_argument("--full", action="store_true", help="print the full type")
    s.add_argument("term", nargs="?")
    s.set_defaults(run=cmd_sort)

    s = sub.add_parser("apply", parents=[local], help="push a term forward along a map")
    s.add_argument("--map", required=True)
    s.add_argument("--theory", help="theory the input lives in (must be the map's domain)")
    s.add_argument("--type", action="store_true", help="the input is a type, not a term")
    s.add_argument("term", nargs="?")
    s.set_defaults(run=cmd_apply)

    def model_args(s):
        s.add_argument("--param", action="append", nargs="+", metavar="K=V")

    def eval_args(s):
        s.add_argument("--bind", action="append", nargs="+", metavar="X=V")

    def axiom_args(s):
        s.add_argument("--enum", action="append", nargs="+", metavar="TYPE=SPEC",
                       help="enumerator, e.g. Ob=0..3 or default=1,2,3 (implies exhaustive)")
        s.add_argument("--bound", type=int, help=f"assignments per axiom (default {DEFAULT_BOUND})")
        s.add_argument("--exhaustive", action="store_true")

    s = sub.add_parser("eval", parents=[local], help="evaluate a term in a model")
    s.add_argument("--model", required=True)
    model_args(s)
    eval_args(s)
    s.add_argument("term", nargs="?")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("migrate", parents=[local], help="pull a model back along a map")
    s.add_argument("--map", required=True)
    s.add_argument("--model", required=True)
    model_args(s)
    eval_args(s)
    axiom_args(s)
    s.add_argument("action", nargs="?", help="eval, axioms or show")
    s.add_argument("term", nargs="?")
    s.set_defaults(run=cmd_migrate)

    s = sub.add_parser("pushout", parents=[local], help="pushout of two simple maps with a common domain")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--name")
    s.add_argument("--out", help="write the result (.gat text, or JSON for .json)")
    s.set_defaults(run=cmd_pushout)

    s = sub.add_parser("axioms", parents=[local], help="search for axiom counterexamples in a model")
    s.add_argument("--model", required=True)
    model_args(s)
    axiom_args(s)
    s.set_defaults(run=cmd_axioms)

    s = sub.add_parser("list", parents=[local], help="list library entries")
    s.add_argument("kind", nargs="?", choices=["theory", "theories", "map", "maps", "model", "models"])
    s.set_defaults(run=cmd_list)

    s = sub.add_parser("export-json", parents=[local], help="export a theory or map as JSON")
    s.add_argument("name")
    s.add_argument("--out")
    s.set_defaults(run=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    _recover_positionals(args)
    missing = None
    if getattr(args, "term", "") is None and args.command in ("sort", "apply", "eval"):
        missing = "a term is required"
    if args.command == "migrate" and args.action not in ("eval", "axioms", "show"):
        missing = "action must be one of eval, axioms, show"
    if missing:
        print(f"gatkit {args.command}: error: {missing}", file=sys.stderr)
        return USAGE
    try:
        return args.run(args)
    except GatError as e:
        code = USAGE if isinstance(e, _USAGE_ERRORS) else FAIL
        if args.json:
            print(json.dumps({"ok": False, "error": _error_data(e)}, ensure_ascii=False, indent=2))
        else:
            print(f"error: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
