"""The bundled computational models.

Each factory takes the theory it interprets (so the model's idents match the
registry's copy of that theory) plus any parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..syntax import GAT
from .base import CheckError, Model, fail, show_value


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        fail(f"expected an integer, got {x!r}")
    return x


def _nat(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        fail("expected nonnegative integer")
    return x


def _str(x) -> str:
    if not isinstance(x, str):
        fail(f"expected text, got {x!r}")
    return x


# -- monoids ----------------------------------------------------------------

def int_plus_monoid(th: GAT) -> Model:
    return Model(th, "IntPlusMonoid",
                 {"default": _int},
                 {"e": lambda: 0, "⋅": lambda x, y: x + y},
                 enumerators={"default": range(-3, 4)})


def times_int_monoid(th: GAT) -> Model:
    return Model(th, "TimesIntMonoid",
                 {"default": _int},
                 {"e": lambda: 1, "⋅": lambda x, y: x * y},
                 enumerators={"default": range(-3, 4)})


def string_monoid(th: GAT) -> Model:
    return Model(th, "StringMonoid",
                 {"default": _str},
                 {"e": lambda: "", "⋅": lambda x, y: x + y},
                 enumerators={"default": ["", "a", "b", "ab", "ba"]},
                 literal=lambda ty, text: text[1:-1] if text[:1] == '"' == text[-1:] and len(text) > 1 else text)


def modular_plus_monoid(th: GAT, n: int = 7) -> Model:
    n = int(n)
    if n <= 0:
        raise CheckError(f"modulus must be positive, got {n}", model="ModularPlusMonoid")

    def carrier(x):
        return _int(x) % n

    return Model(th, "ModularPlusMonoid",
                 {"default": carrier},
                 {"e": lambda: 0, "⋅": lambda x, y: (x + y) % n},
                 params={"n": n},
                 enumerators={"default": range(n)})


# -- arithmetic -------------------------------------------------------------

def nat_arith_native(th: GAT) -> Model:
    return Model(th, "NatArithNative",
                 {"ℕ": _nat},
                 {"Z": lambda: 0, "S": lambda n: n + 1, "+": lambda x, y: x + y, "*": lambda x, y: x * y},
                 enumerators={"ℕ": range(0, 6)})


# -- finite sets, indexed style ---------------------------------------------

def _finset_hom(f, n, m):
    if not isinstance(f, (list, tuple)) or any(isinstance(i, bool) or not isinstance(i, int) for i in f):
        fail(f"expected a list of integers, got {f!r}")
    if len(f) != n:
        fail(f"length of morphism does not match domain: {len(f)} != {n}")
    for i, v in enumerate(f, start=1):
        if not 1 <= v <= m:
            fail(f"index not in codomain: {i}")
    return tuple(f)


def all_functions(n: int, m: int):
    """Every function [n] → [m] as a 1-based tuple, in lexicographic order."""
    return itertools.product(range(1, m + 1), repeat=n)


def fin_set_c(th: GAT, max_size: int = 3) -> Model:
    return Model(th, "FinSetC",
                 {"Ob": _nat, "Hom": _finset_hom},
                 {"id": lambda x: tuple(range(1, x + 1)),
                  "compose": lambda f, g: tuple(g[i - 1] for i in f)},
                 params={"max_size": max_size},
                 enumerators={"Ob": range(0, max_size + 1), "Hom": all_functions})


# -- finite sets, fibered style ---------------------------------------------

@dataclass(frozen=True)
class FinSet:
    n: int

    def __repr__(self):
        return f"FinSet({self.n})"


@dataclass(frozen=True)
class FinFunction:
    values: tuple
    dom: FinSet
    codom: FinSet

    def __repr__(self):
        return f"FinFunction({list(self.values)}, {self.dom.n}, {self.codom.n})"


def _fib_ob(x):
    if isinstance(x, int) and not isinstance(x, bool):
        x = FinSet(x)
    if not isinstance(x, FinSet) or x.n < 0:
        fail("expected nonnegative integer")
    return x


def _fib_hom(f, x, y):
    if not isinstance(f, FinFunction):
        fail(f"expected a FinFunction, got {f!r}")
    if f.dom != x or f.codom != y:
        fail("domain and codomain do not match")
    _finset_hom(f.values, f.dom.n, f.codom.n)
    return f


def _fib_compose(f, g):
    if f.codom != g.dom:
        fail("domain and codomain do not match")
    return FinFunction(tuple(g.values[i - 1] for i in f.values), f.dom, g.codom)


def fin_set_fib(th: GAT, max_size: int = 3) -> Model:
    return Model(th, "FinSetFib",
                 {"Ob": _fib_ob, "Hom": _fib_hom},
                 {"id": lambda x: FinFunction(tuple(range(1, x.n + 1)), x, x),
                  "compose": _fib_compose},
                 params={"max_size": max_size},
                 enumerators={"Ob": [FinSet(n) for n in range(max_size + 1)],
                              "Hom": lambda x, y: (FinFunction(v, x, y) for v in all_functions(x.n, y.n))})


def erase(v):
    """Forget the indices a fibered value carries."""
    if isinstance(v, FinSet):
        return v.n
    if isinstance(v, FinFunction):
        return v.values
    return v


# -- slice categories -------------------------------------------------------

@dataclass(frozen=True)
class SliceOb:
    ob: object
    hom: object


def slice_c(base: Model, over) -> Model:
    th = base.theory
    Ob, Hom = th.resolve("Ob", kind="type"), th.resolve("Hom", kind="type")
    compose, ident = th.resolve("compose", kind="term"), th.resolve("id", kind="term")
    over = base.coerce(Ob, over)

    def ob(x):
        if not isinstance(x, SliceOb):
            fail(f"expected a slice object, got {x!r}")
        try:
            o = base.coerce(Ob, x.ob)
        except CheckError as e:
            fail("ob is not valid", e)
        try:
            h = base.coerce(Hom, x.hom, [o, over])
        except CheckError as e:
            fail("hom is not valid", e)
        return SliceOb(o, h)

    def hom(f, x, y):
        try:
            f = base.coerce(Hom, f, [x.ob, y.ob])
        except CheckError as e:
            fail("morphism is not valid in base category", e)
        if base.apply(compose, [f, y.hom]) != x.hom:
            fail("commutativity of triangle does not hold")
        return f

    base_ob = base.enumerator(Ob) or ()
    base_hom = base.enumerator(Hom)

    def _homs(a, b):
        if base_hom is None:
            return ()
        return base_hom(a, b) if callable(base_hom) else base_hom

    def enum_ob():
        for o in base_ob:
            for h in _homs(o, over):
                yield SliceOb(o, h)

    return Model(th, "SliceC",
                 {Ob: ob, Hom: hom},
                 {ident: lambda x: base.apply(ident, [x.ob]),
                  compose: lambda f, g: base.apply(compose, [f, g])},
                 params={"base": base.name, "over": over},
                 enumerators={Ob: lambda: enum_ob(), Hom: lambda x, y: _homs(x.ob, y.ob)},
                 show=lambda v: f"SliceOb({show_value(v.ob)}, {show_value(v.hom)})"
                 if isinstance(v, SliceOb) else show_value(v))

