"""Acceptance criteria 1–10; each test prints one PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
from contextlib import contextmanager

import pytest

from gatkit.cli import main
from gatkit.colimits import EMPTY
from gatkit.kernel import alpha_equal, alpha_equal_gat, generic_term, subst, substitute
from gatkit.models import CheckError, FinFunction, FinSet, check_axioms, erase
from gatkit.morphisms import (
    check_axiom_preservation,
    check_simple_validity,
    check_welltyped,
    compose_maps,
    migrate_model,
    pushforward,
)
from gatkit.stdlib import build_model, source_text
from gatkit.surface import from_json, parse_term, parse_theory, pretty, to_json
from gatkit.syntax import TermInCtx

import oracles
from constructions import module_by_pushout, square_commutes

INSTANCES = 1000


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number: int, title: str):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\nFAIL criterion {number}: {title}")
            raise
        with capsys.disabled():
            print(f"\nPASS criterion {number}: {title}")
    return run


def cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


def test_criterion_01_category_source_fidelity(criterion):
    with criterion(1, "ThCategory parses to 2 types, 2 terms, axioms assoc/idl/idr; round trips α-equal"):
        src = "theory ThCategory" + source_text("categories.gat").split("theory ThCategory")[1]
        g = parse_theory(src.split("theory ThPreorder")[0])
        assert [j.name for _, j in g.typecons()] == ["Ob", "Hom"]
        assert [j.name for _, j in g.termcons()] == ["compose", "id"]
        assert [j.name for _, j in g.axioms()] == ["assoc", "idl", "idr"]
        assert alpha_equal_gat(parse_theory(pretty(g)), g)
        assert alpha_equal_gat(from_json(to_json(g)), g)


def test_criterion_02_pushforward_examples(criterion, capsys, reg):
    with criterion(2, "apply PlusM and apply OpMonoid print the expected terms"):
        arith, mon = reg.theory("ThArith"), reg.theory("ThMonoid")
        code, out = cli(capsys, "apply", "--map", "PlusM", "e()⋅x⋅e() ⊣ [x]")
        assert code == 0
        assert alpha_equal(parse_term(out, arith), parse_term("(Z()+x)+Z() ⊣ [x::ℕ]", arith))
        code, out = cli(capsys, "apply", "--map", "OpMonoid", "x⋅(e()⋅y) ⊣ [x,y]")
        assert code == 0
        assert alpha_equal(parse_term(out, mon), parse_term("(y⋅e())⋅x ⊣ [x,y]", mon))


def test_criterion_03_negative_checks(criterion, reg):
    with criterion(3, "Bad₂ is ill-typed at Ob and id; Bad₁ breaks unitality at x=0"):
        diags = {d.constructor: d for d in check_welltyped(reg.map("Bad₂"))}
        # Hom is flagged too: once Ob becomes Hom, its context variables have the wrong sort
        assert {"Ob", "id"} <= set(diags)
        assert diags["Ob"].kind == "ArityMismatch" and "Hom" in str(diags["Ob"])
        assert "Ill-typed argument for id" in str(diags["id"])

        bad = reg.map("Bad₁")
        assert check_welltyped(bad) == []
        report = check_axiom_preservation(bad, build_model(reg, "NatArithNative"), {"ℕ": range(21)}, None)
        assert report.welltyped and not report.ok
        # e ↦ S(Z()) = 1 and ⋅ ↦ +: both unit laws compare 1+x with x
        first = next(x for x in range(21) if 1 + x != x)
        found = {a.axiom: a for a in report.counterexamples}
        assert set(found) == {"axiom#4", "axiom#5"}
        assert all(a.env == {"x": first} and a.values == (first + 1, first) for a in found.values())


def test_criterion_04_simple_validity(criterion, reg):
    with criterion(4, "F passes simple validity; compose's generic term goes to tran's"):
        f = reg.map("F")
        assert check_simple_validity(f) == []
        compose = f.dom.resolve("compose", kind="term")
        tran = f.codom.resolve("tran", kind="term")
        assert alpha_equal(pushforward(f, generic_term(f.dom, compose)), generic_term(f.codom, tran))


def test_criterion_05_model_arithmetic(criterion, reg):
    with criterion(5, "model values and FinSetC diagnostics"):
        ints = build_model(reg, "IntPlusMonoid")
        assert ints.apply("⋅", [1, 2]) == 3 and ints.apply("e") == 0
        assert build_model(reg, "StringMonoid").apply("⋅", ["a", "b"]) == "ab"
        mod = build_model(reg, "ModularPlusMonoid", n=7)
        assert mod.apply("⋅", [3, 4]) == mod.apply("e")
        fc = build_model(reg, "FinSetC")
        assert fc.apply("id", [3]) == (1, 2, 3)
        assert fc.apply("compose", [[2, 1], [3, 3, 1]]) == (3, 3)
        with pytest.raises(CheckError) as e:
            fc.coerce("Ob", -1)
        assert e.value.message == "expected nonnegative integer"
        with pytest.raises(CheckError) as e:
            fc.coerce("Hom", [1, 2], [3, 3])
        assert e.value.message.startswith("length of morphism does not match domain")


def test_criterion_06_migration_oracles(criterion, reg):
    with criterion(6, "migrated models agree with their oracles"):
        plus = migrate_model(reg.map("PlusM"), build_model(reg, "NatArithNative"))
        ints = build_model(reg, "IntPlusMonoid")
        mismatches = [(x, y) for x in range(51) for y in range(51)
                      if plus.apply("⋅", [x, y]) != ints.apply("⋅", [x, y])]
        assert mismatches == []

        fc = build_model(reg, "FinSetC")
        op = migrate_model(reg.map("OpCat"), fc)
        checked = 0
        for a, b, c in itertools.product(range(4), repeat=3):
            # f: a → b and g: b → c in the opposite are b → a and c → b in FinSetC
            for f in oracles.maps_between(b, a):
                for g in oracles.maps_between(c, b):
                    got = op.apply("compose", [f, g])
                    assert got == oracles.then(g, f), (a, b, c, f, g)
                    assert op.coerce("Hom", got, [a, c]) == got
                    checked += 1
        assert checked > 1000


def test_criterion_07_axiom_suites(criterion, reg):
    with criterion(7, "exhaustive axiom checks find no counterexamples"):
        mod = check_axioms(build_model(reg, "ModularPlusMonoid", n=7), bound=None)
        assert mod.ok and [r.checked for r in mod.results] == [7 ** 3, 7, 7]
        for name in ["FinSetC", "SliceC"]:
            report = check_axioms(build_model(reg, name), bound=None)
            assert report.ok, name
            assert all(r.status == "holds" and r.exhaustive for r in report.results), name
        free = build_model(reg, "FreeCategory")
        assert all(free.covers(ax) for _, ax in free.theory.axioms())
        report = check_axioms(free, bound=None)
        assert report.ok and {r.status for r in report.results} == {"holds"}


def test_criterion_08_hygiene_and_functoriality(criterion, reg):
    with criterion(8, f"{INSTANCES} hygiene, composition and functoriality instances"):
        rng = random.Random(20240508)
        mon, cat = reg.theory("ThMonoid"), reg.theory("ThCategory")
        mon_ops = [(mon.resolve("⋅", kind="term"), 2), (mon.resolve("e", kind="term"), 0)]

        def monoid_subst(src, dst):
            return {v: oracles.random_term(rng, mon_ops, dst, 2) for v in src.idents()}

        def category_subst(src, dst):
            return oracles.path_substitution(rng, cat, src, dst)

        sort = mon.resolve("default", kind="type")

        def instance(k):
            """(theory, term, fresh target context maker, substitution maker)"""
            if k % 2:
                return (cat, oracles.random_category_term(rng, cat),
                        lambda: oracles.path_ctx(cat, rng.randint(1, 3)), category_subst)
            return (mon, oracles.random_monoid_term(rng, mon),
                    lambda: oracles.colliding_ctx(sort, rng.randint(1, 3)), monoid_subst)

        leaks = 0
        for k in range(INSTANCES):
            gat, t, new_ctx, make = instance(k)
            dst = new_ctx()
            assert dst.names()[0] == t.ctx.names()[0]  # display names collide
            sigma = make(t.ctx, dst)
            out = substitute(gat, t, sigma, dst)
            images = [oracles.positional(sigma[v], dst.tag) for v in t.ctx.idents()]
            expected = oracles.subst_positional(oracles.positional(t.term, t.ctx.tag), images)
            got = oracles.positional(out, dst.tag)
            assert got == expected
            leaks += oracles.leaks(got)
        assert leaks == 0

        for k in range(INSTANCES):
            gat, t, new_ctx, make = instance(k)
            mid, last = new_ctx(), new_ctx()
            sigma, tau = make(t.ctx, mid), make(mid, last)
            once = substitute(gat, t, {v: subst(s, tau) for v, s in sigma.items()}, last)
            twice = substitute(gat, TermInCtx(mid, substitute(gat, t, sigma, mid)), tau, last)
            assert once == twice

        pairs = [("OpMonoid", "OpMonoid"), ("OpMonoid", "PlusM"), ("OpMonoid", "TimesM"),
                 ("OpCat", "OpCat"), ("OpCat", "F")]
        composed = {p: compose_maps(reg.map(p[0]), reg.map(p[1])) for p in pairs}
        for k in range(INSTANCES):
            first, second = pair = pairs[k % len(pairs)]
            f, g = reg.map(first), reg.map(second)
            t = (oracles.random_monoid_term(rng, f.dom) if f.dom.name == "ThMonoid"
                 else oracles.random_category_term(rng, f.dom))
            assert alpha_equal(pushforward(composed[pair], t), pushforward(g, pushforward(f, t)))


def test_criterion_09_pushout_reconstruction(criterion, reg):
    with criterion(9, "explicit pushout plus scalar multiplication is α-equal to ThModule"):
        module, (span, lleg, rleg, _) = module_by_pushout(reg)
        assert span.apex is EMPTY and alpha_equal_gat(span.apex, reg.theory("ThEmpty"))
        assert alpha_equal_gat(module, reg.theory("ThModule"))
        assert square_commutes(span, lleg, rleg)


def test_criterion_10_fibered_indexed_agreement(criterion, reg):
    with criterion(10, "FinSetFib and FinSetC agree under erasure on sizes ≤ 3"):
        fib, fc = build_model(reg, "FinSetFib"), build_model(reg, "FinSetC")

        def outcome(fn):
            try:
                return erase(fn())
            except CheckError:
                return CheckError

        mismatches = []
        for n in range(-1, 4):
            if outcome(lambda: fib.coerce("Ob", n)) != outcome(lambda: fc.coerce("Ob", n)):
                mismatches.append(("Ob", n))
        for n in range(4):
            if erase(fib.apply("id", [FinSet(n)])) != fc.apply("id", [n]):
                mismatches.append(("id", n))
        for n, m in itertools.product(range(4), repeat=2):
            for length in range(4):
                for vals in itertools.product(range(0, m + 2), repeat=length):
                    wrapped = FinFunction(vals, FinSet(n), FinSet(m))
                    if outcome(lambda: fib.coerce("Hom", wrapped, [FinSet(n), FinSet(m)])) != \
                            outcome(lambda: fc.coerce("Hom", list(vals), [n, m])):
                        mismatches.append(("Hom", n, m, vals))
        for a, b, c in itertools.product(range(4), repeat=3):
            for f in oracles.maps_between(a, b):
                for g in oracles.maps_between(b, c):
                    ff = FinFunction(f, FinSet(a), FinSet(b))
                    gg = FinFunction(g, FinSet(b), FinSet(c))
                    if erase(fib.apply("compose", [ff, gg])) != fc.apply("compose", [f, g]):
                        mismatches.append(("compose", f, g))
        assert mismatches == []
