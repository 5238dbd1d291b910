"""Deterministic bounded search for axiom counterexamples in a model."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from ..errors import GatError
from ..scopes import Ident
from ..syntax import AlgTerm, TypeCtx
from .base import CheckError, Model, eval_term

DEFAULT_BOUND = 100


class MissingEnumerator(GatError):
    pass


@dataclass
class AxiomResult:
    name: str
    status: str  # holds | counterexample | skipped
    env: dict[str, Any] | None = None
    lhs_value: Any = None
    rhs_value: Any = None
    checked: int = 0
    exhaustive: bool = False
    reason: str = ""

    def to_dict(self, show=repr) -> dict:
        d: dict[str, Any] = {"axiom": self.name, "status": self.status, "checked": self.checked,
                             "exhaustive": self.exhaustive}
        if self.env is not None:
            d["env"] = {k: show(v) for k, v in self.env.items()}
            d["lhs"] = show(self.lhs_value)
            d["rhs"] = show(self.rhs_value)
        if self.reason:
            d["reason"] = self.reason
        return d


@dataclass
class AxiomReport:
    model: str
    theory: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[AxiomResult]:
        return [r for r in self.results if r.status == "counterexample"]

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self, show=repr) -> dict:
        return {"model": self.model, "theory": self.theory, "ok": self.ok,
                "axioms": [r.to_dict(show) for r in self.results]}

    def to_text(self, show=repr) -> str:
        lines = [f"axioms of {self.theory} in {self.model}:"]
        for r in self.results:
            extent = "exhaustive" if r.exhaustive else "bounded"
            if r.status == "holds":
                lines.append(f"  {r.name}: holds ({r.checked} assignments, {extent})")
            elif r.status == "counterexample":
                env = ", ".join(f"{k}={show(v)}" for k, v in r.env.items())
                lines.append(f"  {r.name}: COUNTEREXAMPLE {env}: {show(r.lhs_value)} != {show(r.rhs_value)}")
            else:
                lines.append(f"  {r.name}: skipped ({r.reason})")
        return "\n".join(lines)


def axiom_label(gat, ident: Ident, ax) -> str:
    if ax.name:
        return ax.name
    return f"axiom#{gat.position(ident)}"


def resolve_enumerators(model: Model, enumerators: Mapping | None) -> dict[Ident, Any]:
    out = dict(model.enumerators)
    for k, v in (enumerators or {}).items():
        key = k if isinstance(k, Ident) else model.theory.resolve(k, kind="type")
        out[key] = v
    return out


def _candidates(enum, tyargs) -> Iterator:
    if callable(enum):
        return iter(enum(*tyargs))
    return iter(enum)


def assignments(model: Model, ctx: TypeCtx, enums: Mapping[Ident, Any]) -> Iterator[dict[Ident, Any]]:
    """All environments for ``ctx`` whose values pass the model's coercions."""
    entries = list(ctx)
    for _, ty in entries:
        if ty.head not in enums:
            raise MissingEnumerator(f"no enumerator for {model.theory.display(ty.head)}")
    env: dict[Ident, Any] = {}
    cache: dict[tuple, list] = {}

    def valid(head, tyargs):
        out = []
        for v in _candidates(enums[head], tyargs):
            try:
                out.append(model.coerce(head, v, tyargs))
            except CheckError:
                continue
        return out

    def candidates(head, tyargs):
        try:
            key = (head, tuple(tyargs))
            hash(key)
        except TypeError:
            return valid(head, tyargs)
        if key not in cache:
            cache[key] = valid(head, tyargs)
        return cache[key]

    def go(i):
        if i == len(entries):
            yield dict(env)
            return
        ident, ty = entries[i]
        tyargs = [eval_term(model, env, a) for a in ty.args]
        for v in candidates(ty.head, tyargs):
            env[ident] = v
            yield from go(i + 1)
        env.pop(ident, None)

    yield from go(0)


def search(model: Model, ctx: TypeCtx, lhs: AlgTerm, rhs: AlgTerm, enums: Mapping[Ident, Any],
           bound: int | None = DEFAULT_BOUND, label: str = "equation") -> AxiomResult:
    """Evaluate ``lhs`` and ``rhs`` under enumerated assignments until they differ."""
    try:
        stream = assignments(model, ctx, enums)
        if bound is not None:
            stream = itertools.islice(stream, bound + 1)
        checked = 0
        for env in stream:
            if bound is not None and checked >= bound:
                return AxiomResult(label, "holds", checked=checked, exhaustive=False)
            checked += 1
            try:
                lv = eval_term(model, env, lhs)
                rv = eval_term(model, env, rhs)
            except CheckError as e:
                return AxiomResult(label, "skipped", checked=checked, reason=f"evaluation failed: {e}")
            if lv != rv:
                named = {k.name: v for k, v in env.items()}
                return AxiomResult(label, "counterexample", named, lv, rv, checked=checked)
        return AxiomResult(label, "holds", checked=checked, exhaustive=True)
    except (MissingEnumerator, CheckError) as e:
        return AxiomResult(label, "skipped", reason=str(e))


def check_axioms(model: Model, enumerators: Mapping | None = None, bound: int | None = DEFAULT_BOUND,
                 axioms=None) -> AxiomReport:
    """Check every axiom of the model's theory (or the given subset).

    ``bound`` caps the number of assignments per axiom; ``None`` means
    exhaustive over the enumerators.
    """
    enums = resolve_enumerators(model, enumerators)
    report = AxiomReport(model.name, model.theory.name)
    for ident, ax in model.theory.axioms():
        label = axiom_label(model.theory, ident, ax)
        if axioms is not None and label not in axioms:
            continue
        if model.covers(ax) is False:
            report.results.append(AxiomResult(label, "skipped", reason="not covered by the normalization policy"))
            continue
        res = search(model, ax.localcontext, ax.lhs, ax.rhs, enums, bound, label)
        report.results.append(res)
    return report
