from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatkit.colimits import inclusion_map
from gatkit.errors import ErasureViolation, TheoryMismatch
from gatkit.kernel import alpha_equal, generic_term, infer_sort
from gatkit.models import CheckError, eval_term
from gatkit.morphisms import (
    COUNTEREXAMPLE,
    PROVED,
    UNVERIFIED,
    GeneralMap,
    IdMap,
    InclMap,
    SimpleMap,
    check_axiom_preservation,
    check_simple_validity,
    check_welltyped,
    compose_maps,
    kind_name,
    migrate_model,
    narrow,
    promote,
    pushforward,
)
from gatkit.stdlib import build_model
from gatkit.surface import parse_map, parse_term, parse_theory, pretty

import oracles

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def push_str(reg, map_name, src):
    m = reg.map(map_name)
    return pushforward(m, parse_term(src, m.dom))


def sample(rng, reg, theory):
    g = reg.theory(theory)
    if theory == "ThMonoid":
        return oracles.random_monoid_term(rng, g)
    return oracles.random_category_term(rng, g)


# -- kinds --------------------------------------------------------------------

def test_stdlib_map_kinds(reg):
    kinds = {n: kind_name(m) for n, m in reg.items("map")}
    assert kinds == {"PlusM": "SimpleMap", "TimesM": "GeneralMap", "F": "SimpleMap",
                     "OpMonoid": "GeneralMap", "OpCat": "GeneralMap",
                     "Bad₁": "GeneralMap", "Bad₂": "GeneralMap"}


def test_identity_declaration_narrows_to_idmap(reg, scratch):
    m = parse_map("map I(ThMonoid, ThMonoid) { default => default\n x⋅y ⊣ [x,y] => x⋅y\n e() => e() }", scratch)
    assert isinstance(m, IdMap)


def test_inclusion_declaration_narrows_to_inclmap(reg, scratch):
    m = parse_map("map J(ThMonoid, ThGroup) { default => default\n x⋅y ⊣ [x,y] => x⋅y\n e() => e() }", scratch)
    assert isinstance(m, InclMap)


def test_narrow_of_promoted_simple_map(reg):
    f = reg.map("F")
    assert narrow(promote(f)) == f


# -- pushforward --------------------------------------------------------------

def test_pushforward_plus(reg):
    out = push_str(reg, "PlusM", "e()⋅x⋅e() ⊣ [x]")
    assert alpha_equal(out, parse_term("(Z()+x)+Z() ⊣ [x::ℕ]", reg.theory("ThArith")))
    assert pretty(out, reg.theory("ThArith")) == "Z()+x+Z() ⊣ [x::ℕ]"


def test_pushforward_opposite_monoid(reg):
    out = push_str(reg, "OpMonoid", "x⋅(e()⋅y) ⊣ [x,y]")
    assert alpha_equal(out, parse_term("(y⋅e())⋅x ⊣ [x,y]", reg.theory("ThMonoid")))


def test_pushforward_opposite_category(reg):
    cat = reg.theory("ThCategory")
    out = push_str(reg, "OpCat", "compose(f,g) ⊣ [(a,b,c)::Ob, f::Hom(a,b), g::Hom(b,c)]")
    assert alpha_equal(out, parse_term("compose(g,f) ⊣ [(a,b,c)::Ob, f::Hom(b,a), g::Hom(c,b)]", cat))


def test_pushforward_of_a_context(reg):
    m = reg.map("F")
    t = parse_term("f ⊣ [(a,b)::Ob, f::Hom(a,b)]", m.dom)
    ctx = pushforward(m, t.ctx)
    assert ctx.names() == ["a", "b", "f"]
    assert alpha_equal(pushforward(m, t), parse_term("f ⊣ [a, b, f::Leq(a,b)]", m.codom))


def test_pushforward_along_identity(reg):
    g = reg.theory("ThMonoid")
    t = parse_term("x⋅e() ⊣ [x]", g)
    assert alpha_equal(pushforward(IdMap(g), t), t)


def test_promote_identity(reg):
    g = reg.theory("ThMonoid")
    p = promote(IdMap(g))
    assert isinstance(p, GeneralMap)
    assert alpha_equal(p.termmap[g.resolve("⋅", kind="term")], parse_term("x⋅y ⊣ [x,y]", g))


def test_promote_simple(reg):
    f = reg.map("F")
    p = promote(f)
    compose = f.dom.resolve("compose", kind="term")
    want = parse_term("tran(f,g) ⊣ [a, b, c, f::Leq(a,b), g::Leq(b,c)]", f.codom)
    assert alpha_equal(p.termmap[compose], want)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_promote_preserves_pushforward(reg, seed):
    rng = random.Random(seed)
    for name, m in reg.items("map"):
        if name in reg.expected_invalid:
            continue
        t = sample(rng, reg, m.dom.name)
        assert alpha_equal(pushforward(promote(m), t), pushforward(m, t)), name


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_sort_coherence(reg, seed):
    rng = random.Random(seed)
    for name in ["PlusM", "TimesM", "F", "OpMonoid", "OpCat"]:
        m = reg.map(name)
        t = sample(rng, reg, m.dom.name)
        out = pushforward(m, t)
        src_sort = infer_sort(m.dom, t.ctx, t.term).head
        image = promote(m).typemap[src_sort]
        assert infer_sort(m.codom, out.ctx, out.term).head == image.type.head


# -- composition --------------------------------------------------------------

def test_compose_with_identity(reg):
    m = reg.map("OpMonoid")
    assert compose_maps(IdMap(m.dom), m) is m
    assert compose_maps(m, IdMap(m.codom)) is m


def test_compose_kinds(reg):
    plus, op = reg.map("PlusM"), reg.map("OpMonoid")
    assert isinstance(compose_maps(op, plus), GeneralMap)
    grp = reg.theory("ThGroup")
    incl = inclusion_map(reg.theory("ThMonoid"), grp)
    assert isinstance(compose_maps(incl, InclMap(grp, grp)), InclMap)
    f = reg.map("F")
    assert isinstance(compose_maps(IdMap(f.dom), f), SimpleMap)


def test_compose_requires_matching_theories(reg):
    with pytest.raises(TheoryMismatch):
        compose_maps(reg.map("PlusM"), reg.map("OpMonoid"))


def test_double_opposite_is_identity(reg):
    op = reg.map("OpMonoid")
    twice = compose_maps(op, op)
    rng = random.Random(7)
    for _ in range(100):
        t = oracles.random_monoid_term(rng, op.dom)
        assert alpha_equal(pushforward(twice, t), t)


def test_compose_simple_with_inclusion(reg, scratch):
    big = parse_theory("theory ThPreorderTop extends ThPreorder { top() :: default }", scratch)
    f = reg.map("F")
    both = compose_maps(f, inclusion_map(f.codom, big))
    assert isinstance(both, SimpleMap)
    t = parse_term("compose(f,g) ⊣ [(a,b,c)::Ob, f::Hom(a,b), g::Hom(b,c)]", f.dom)
    assert alpha_equal(pushforward(both, t), pushforward(f, t))
    assert both.codom is big


PAIRS = [("OpMonoid", "OpMonoid"), ("OpMonoid", "PlusM"), ("OpMonoid", "TimesM"),
         ("OpCat", "OpCat"), ("OpCat", "F")]


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(PAIRS))
def test_functoriality(reg, seed, pair):
    f, g = reg.map(pair[0]), reg.map(pair[1])
    t = sample(random.Random(seed), reg, f.dom.name)
    assert alpha_equal(pushforward(compose_maps(f, g), t), pushforward(g, pushforward(f, t)))


# -- well-typedness and validity ----------------------------------------------

def test_stdlib_maps_are_welltyped(reg):
    for name in ["PlusM", "TimesM", "F", "OpMonoid", "OpCat", "Bad₁"]:
        assert check_welltyped(reg.map(name)) == [], name


def test_bad_two_diagnostics(reg):
    diags = check_welltyped(reg.map("Bad₂"))
    by = {d.constructor: d for d in diags}
    assert by["Ob"].kind == "ArityMismatch"
    assert str(by["Ob"]) == "Ob at 12:3: ArityMismatch: Ill-typed arguments for Hom: expected 2, got 0"
    assert by["id"].kind == "SortMismatch"
    assert "Ill-typed argument for id" in str(by["id"])


def test_arity_disagreement_in_simple_map(reg, scratch):
    m = parse_map("map G(ThCategory, ThPreorder) { Ob => default\n Hom(a,b) ⊣ [a,b] => Leq(a,b)\n"
                  " compose => tran\n id => refl }", scratch)
    cat, pre = reg.theory("ThCategory"), reg.theory("ThPreorder")
    bad = SimpleMap(cat, pre, {**m.typemap, cat.resolve("Hom", kind="type"): pre.resolve("default", kind="type")},
                    m.termmap, "bad")
    assert check_welltyped(bad)


def test_simple_validity_of_f(reg):
    assert check_simple_validity(reg.map("F")) == []
    f = reg.map("F")
    compose, tran = f.dom.resolve("compose", kind="term"), f.codom.resolve("tran", kind="term")
    assert alpha_equal(pushforward(f, generic_term(f.dom, compose)), generic_term(f.codom, tran))


def test_simple_validity_of_identity(reg):
    cat = reg.theory("ThCategory")
    ident = SimpleMap(cat, cat, {i: i for i, _ in cat.typecons()}, {i: i for i, _ in cat.termcons()}, "I")
    assert check_simple_validity(ident) == []


def test_simple_validity_rejects_shape_mismatch(reg):
    cat = reg.theory("ThCategory")
    compose = cat.resolve("compose", kind="term")
    bad = SimpleMap(cat, cat, {i: i for i, _ in cat.typecons()},
                    {i: compose for i, _ in cat.termcons()}, "bad")
    diags = check_simple_validity(bad)
    assert [d.constructor for d in diags] == ["id"]


# -- axiom preservation -------------------------------------------------------

def test_bad_one_counterexample(reg):
    nat = build_model(reg, "NatArithNative")
    report = check_axiom_preservation(reg.map("Bad₁"), nat, {"ℕ": range(21)}, None)
    assert report.welltyped and not report.ok
    ce = {a.axiom: a for a in report.counterexamples}
    assert set(ce) == {"axiom#4", "axiom#5"}
    assert ce["axiom#4"].env == {"x": 0}
    assert ce["axiom#4"].values == (1, 0)
    for a in report.counterexamples:
        env = {i: a.env[n] for i, n in zip(a.lhs.ctx.idents(), a.lhs.ctx.names())}
        assert eval_term(nat, env, a.lhs.term) != eval_term(nat, env, a.rhs)


def test_plus_preserves_axioms_on_small_range(reg):
    nat = build_model(reg, "NatArithNative")
    report = check_axiom_preservation(reg.map("PlusM"), nat, {"ℕ": range(21)}, None)
    assert report.ok
    assert {a.status for a in report.axioms} <= {UNVERIFIED, PROVED}


def test_opposite_monoid_proved_by_normalization(reg):
    report = check_axiom_preservation(reg.map("OpMonoid"))
    assert [a.status for a in report.axioms] == [PROVED] * 3
    assoc = report.axioms[0]
    mon = reg.theory("ThMonoid")
    assert alpha_equal(assoc.lhs, parse_term("z⋅(y⋅x) ⊣ [x,y,z]", mon))
    want = parse_term("(z⋅y)⋅x ⊣ [x,y,z]", mon)
    assert alpha_equal(type(assoc.lhs)(assoc.lhs.ctx, assoc.rhs), want)


def test_ill_typed_map_reports_no_axioms(reg):
    report = check_axiom_preservation(reg.map("Bad₂"))
    assert not report.welltyped and report.axioms == []
    assert "ILL-TYPED" in report.to_text()
    assert report.to_dict()["ok"] is False


def test_validity_without_witness_is_unverified(reg):
    report = check_axiom_preservation(reg.map("PlusM"))
    assert {a.status for a in report.axioms} == {UNVERIFIED}
    assert COUNTEREXAMPLE not in report.to_text()


# -- migration ----------------------------------------------------------------

def test_migrate_plus(reg):
    m = migrate_model(reg.map("PlusM"), build_model(reg, "NatArithNative"))
    ref = build_model(reg, "IntPlusMonoid")
    assert m.apply("e") == 0
    assert m.apply("⋅", [1, 2]) == 3
    for x in range(0, 51, 5):
        for y in range(0, 51, 7):
            assert m.apply("⋅", [x, y]) == ref.apply("⋅", [x, y])


def test_migrate_times(reg):
    m = migrate_model(reg.map("TimesM"), build_model(reg, "NatArithNative"))
    assert m.apply("e") == 1
    assert m.apply("⋅", [3, 4]) == 12


def test_migrated_coercion_uses_target_carrier(reg):
    m = migrate_model(reg.map("PlusM"), build_model(reg, "NatArithNative"))
    with pytest.raises(CheckError) as e:
        m.coerce("default", -1)
    assert e.value.message == "expected nonnegative integer"


def test_migrate_opposite_category(reg):
    fc = build_model(reg, "FinSetC")
    m = migrate_model(reg.map("OpCat"), fc)
    assert m.apply("compose", [[3, 3, 1], [2, 1]]) == fc.apply("compose", [[2, 1], [3, 3, 1]])
    assert m.apply("id", [3]) == (1, 2, 3)
    assert m.coerce("Hom", [1, 1], [3, 2]) == (1, 1)  # a morphism 2 → 3 in FinSetC
    with pytest.raises(CheckError):
        m.coerce("Hom", [1, 1, 1], [3, 2])


def test_migrate_along_identity(reg):
    mb = build_model(reg, "IntPlusMonoid")
    assert migrate_model(IdMap(mb.theory), mb) is mb


def test_migrate_needs_matching_theory(reg):
    with pytest.raises(TheoryMismatch):
        migrate_model(reg.map("PlusM"), build_model(reg, "IntPlusMonoid"))


def test_erasure_violation(reg, scratch):
    m = parse_map("map Pad(ThCategory, ThCategory) {\n  Ob => Ob\n  Hom => Hom\n"
                  "  id(a) ⊣ [a::Ob] => id(a)\n"
                  "  compose(f, g) ⊣ [(a,b,c)::Ob, f::(a → b), g::(b → c)] => compose(f, compose(id(b), g))\n}",
                  scratch)
    assert check_welltyped(m) == []
    with pytest.raises(ErasureViolation) as e:
        migrate_model(m, build_model(reg, "FinSetC"))
    assert "compose" in str(e.value) and "b" in str(e.value)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_migration_is_contravariant(reg, seed):
    rng = random.Random(seed)
    op, plus = reg.map("OpMonoid"), reg.map("PlusM")
    nat = build_model(reg, "NatArithNative")
    direct = migrate_model(compose_maps(op, plus), nat)
    stepwise = migrate_model(op, migrate_model(plus, nat))
    t = oracles.random_monoid_term(rng, op.dom)
    env = {i: rng.randint(0, 20) for i in t.ctx.idents()}
    assert eval_term(direct, env, t.term) == eval_term(stepwise, env, t.term)
