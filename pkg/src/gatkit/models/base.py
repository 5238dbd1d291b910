"""Models as explicit values: per-type coercions and per-operation evaluators.

Dependent types are handled in the indexed style: the carrier of ``Hom`` is
one big set and ``coerce(Hom, f, [a, b])`` either returns a validated
morphism from ``a`` to ``b`` or raises :class:`CheckError`.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Mapping

from ..errors import ArityMismatch, GatError, MissingAssignment, UnknownConstructor
from ..scopes import Ident
from ..syntax import GAT, AlgTerm, App, Var

Value = Any
Enumerator = Callable[..., Iterable[Value]] | Iterable[Value]


class CheckError(GatError):
    """A failed coercion or operation, with the theory/model/method involved."""

    def __init__(self, message: str, *, theory: str | None = None, model: str | None = None,
                 operation: str | None = None, cause: CheckError | None = None):
        super().__init__(message or "check failed")
        self.theory = theory
        self.model = model
        self.operation = operation
        self.cause = cause

    def where(self) -> str:
        parts = [p for p in (self.theory, self.model, self.operation) if p]
        return "/".join(parts)

    def __str__(self):
        head = f"[{self.where()}] {self.message}" if self.where() else self.message
        if self.cause is not None:
            inner = str(self.cause).replace("\n", "\n  ")
            return f"{head}\n  caused by: {inner}"
        return head

    def chain(self) -> list[CheckError]:
        out, e = [], self
        while e is not None:
            out.append(e)
            e = e.cause if isinstance(e.cause, CheckError) else None
        return out

    def to_dict(self) -> dict:
        return {
            "message": self.message,
            "theory": self.theory,
            "model": self.model,
            "operation": self.operation,
            "cause": self.cause.to_dict() if isinstance(self.cause, CheckError) else None,
        }


class IncompleteModel(GatError):
    pass


def fail(message: str, cause: Exception | None = None):
    """Raise from inside a coercion or operation; the model fills in context."""
    if cause is not None and not isinstance(cause, CheckError):
        cause = CheckError(str(cause))
    raise CheckError(message, cause=cause)


def _key(theory: GAT, key, kind: str) -> Ident:
    if isinstance(key, Ident):
        return key
    return theory.resolve(key, kind=kind)


class Model:
    """An interpretation of ``theory``.

    ``types`` maps each type constructor (name or :class:`Ident`) to a
    coercion ``fn(value, *type_args) -> value``; ``ops`` maps each term
    constructor to ``fn(*explicit_args) -> value``. Missing entries are an
    error at construction time.
    """

    def __init__(self, theory: GAT, name: str, types: Mapping, ops: Mapping, *,
                 params: Mapping | None = None, enumerators: Mapping | None = None,
                 show: Callable[[Value], str] | None = None,
                 literal: Callable[[Ident, str], Value] | None = None):
        self.theory = theory
        self.name = name
        self.params = dict(params or {})
        self.coercions = {_key(theory, k, "type"): v for k, v in types.items()}
        self.operations = {_key(theory, k, "term"): v for k, v in ops.items()}
        self.enumerators = {_key(theory, k, "type"): v for k, v in (enumerators or {}).items()}
        self._show = show
        self._literal = literal
        missing = [j.name for i, j in theory.typecons() if i not in self.coercions]
        missing += [j.name for i, j in theory.termcons() if i not in self.operations]
        if missing:
            raise IncompleteModel(
                f"model {name} of {theory.name} lacks implementations for: {', '.join(missing)}"
            )

    def __repr__(self):
        return f"Model({self.name} : {self.theory.name})"

    def _context(self, e: CheckError, op: Ident):
        if e.model is None:
            e.theory = self.theory.name
            e.model = self.name
            e.operation = self.theory.display(op)
        return e

    def coerce(self, ty, value: Value, tyargs=()) -> Value:
        ident = _key(self.theory, ty, "type")
        tc = self.theory.typecon(ident)
        if len(tyargs) != len(tc.args):
            raise ArityMismatch(f"{tc.name} takes {len(tc.args)} type argument(s), got {len(tyargs)}")
        try:
            return self.coercions[ident](value, *tyargs)
        except CheckError as e:
            raise self._context(e, ident)

    def apply(self, op, args=()) -> Value:
        ident = _key(self.theory, op, "term")
        tc = self.theory.termcon(ident)
        if len(args) != len(tc.args):
            raise ArityMismatch(f"{tc.name} takes {len(tc.args)} argument(s), got {len(args)}")
        try:
            return self.operations[ident](*args)
        except CheckError as e:
            raise self._context(e, ident)

    def eval_term(self, env: Mapping[Ident, Value], t: AlgTerm) -> Value:
        return eval_term(self, env, t)

    def show(self, v: Value) -> str:
        if self._show is not None:
            return self._show(v)
        return show_value(v)

    def literal(self, ty: Ident, text: str) -> Value:
        if self._literal is not None:
            return self._literal(ty, text)
        return parse_literal(text)

    def covers(self, axiom) -> bool | None:
        """Whether the model claims ``axiom`` holds by construction; ``None``
        when it has no opinion. Free models override this."""
        return None

    def enumerator(self, ty: Ident):
        return self.enumerators.get(ty)


def eval_term(m: Model, env: Mapping[Ident, Value], t: AlgTerm) -> Value:
    if isinstance(t, Var):
        try:
            return env[t.id]
        except KeyError:
            raise MissingAssignment(f"no value for variable {t.id.name}") from None
    if not isinstance(t, App):
        raise UnknownConstructor(f"cannot evaluate {t!r}")
    return m.apply(t.head, [eval_term(m, env, a) for a in t.args])


def show_value(v: Value) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, str):
        return '"' + v.replace('"', '\\"') + '"'
    if isinstance(v, (tuple, list)):
        return "[" + ",".join(show_value(x) for x in v) + "]"
    return str(v)


def parse_literal(text: str) -> Value:
    """Integers bare, lists as ``[1,2,3]``, text quoted; anything else is text."""
    s = text.strip()
    if s.startswith('"') and s.endswith('"') and len(s) >= 2:
        return s[1:-1]
    if s.startswith("[") and s.endswith("]"):
        inner = s[1:-1].strip()
        if not inner:
            return ()
        return tuple(parse_literal(x) for x in inner.split(","))
    try:
        return int(s)
    except ValueError:
        return s
