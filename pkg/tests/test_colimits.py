from __future__ import annotations

import pytest

from gatkit.colimits import (
    EMPTY,
    Span,
    common_prefix,
    coproduct_span,
    extend_with_using,
    identity_span,
    inclusion_map,
    pushout_simple,
    rename_theory,
)
from gatkit.errors import IncompatibleIdentification, NameCollision, NotAnInclusion, UnknownName
from gatkit.kernel import alpha_equal, alpha_equal_gat, generic_term
from gatkit.morphisms import (
    InclMap,
    SimpleMap,
    check_simple_validity,
    check_welltyped,
    compose_maps,
    image_ident,
    pushforward,
)
from gatkit.surface import parse_theory

from constructions import module_by_pushout, square_commutes


def names(g):
    return [j.name for _, j in g.constructors()]


# -- renaming -----------------------------------------------------------------

def test_rename_default_to_scalar(reg):
    mon = reg.theory("ThMonoid")
    renamed, iso = rename_theory(mon, {"default": "Scalar"})
    assert names(renamed) == ["Scalar", "⋅", "e"]
    assert not set(renamed.tags()) & set(mon.tags())
    assert check_welltyped(iso) == [] and check_simple_validity(iso) == []
    images = list(iso.typemap.values()) + list(iso.termmap.values())
    assert len(set(images)) == len(images) == len(mon.constructors())


def test_empty_rename_is_a_copy(reg):
    mon = reg.theory("ThMonoid")
    copy, iso = rename_theory(mon, {})
    assert alpha_equal_gat(copy, mon)
    assert all(a.name == b.name for a, b in iso.termmap.items())


def test_rename_round_trip(reg):
    ring = reg.theory("ThRing")
    there, _ = rename_theory(ring, {"default": "Scalar", "one": "unit"})
    back, _ = rename_theory(there, {"Scalar": "default", "unit": "one"})
    assert alpha_equal_gat(back, ring)


@pytest.mark.parametrize("spec,err", [
    ({"e": "k", "⋅": "k"}, NameCollision),
    ({"e": "⋅"}, NameCollision),
    ({"nope": "x"}, UnknownName),
])
def test_rename_errors(reg, spec, err):
    with pytest.raises(err):
        rename_theory(reg.theory("ThMonoid"), spec)


# -- inclusions ---------------------------------------------------------------

def test_inclusions(reg):
    assert isinstance(inclusion_map(reg.theory("ThSet"), reg.theory("ThMonoid")), InclMap)
    incl = inclusion_map(reg.theory("ThNat"), reg.theory("ThArith"))
    assert check_welltyped(incl) == []


def test_reverse_inclusion_fails(reg):
    with pytest.raises(NotAnInclusion) as e:
        inclusion_map(reg.theory("ThMonoid"), reg.theory("ThSet"))
    assert "⋅" in str(e.value) and "e" in str(e.value)


# -- pushouts -----------------------------------------------------------------

def test_coproduct_of_two_types(reg):
    a, _ = rename_theory(reg.theory("ThSet"), {"default": "A"})
    b, _ = rename_theory(reg.theory("ThSet"), {"default": "B"})
    p, lleg, rleg = pushout_simple(coproduct_span(a, b))
    assert names(p) == ["A", "B"]
    assert image_ident(rleg, b.resolve("B")) != image_ident(lleg, a.resolve("A"))


def test_pushout_over_a_shared_type(reg):
    s, mon, grp = reg.theory("ThSet"), reg.theory("ThMonoid"), reg.theory("ThAdditiveAbelianGroup")
    span = Span(s, inclusion_map(s, mon), inclusion_map(s, grp))
    p, lleg, rleg = pushout_simple(span, "Both")
    assert names(p).count("default") == 1
    size = lambda g: len(g.judgments())  # noqa: E731
    assert size(p) == size(mon) + size(grp) - size(s)
    assert square_commutes(span, lleg, rleg)
    assert check_welltyped(rleg) == [] and check_simple_validity(rleg) == []


def test_pushout_identifies_renamed_types(reg):
    s, mon, arith = reg.theory("ThSet"), reg.theory("ThMonoid"), reg.theory("ThArith")
    right = SimpleMap(s, arith, {s.resolve("default"): arith.resolve("ℕ")}, {}, "toNat")
    span = Span(s, inclusion_map(s, mon), right)
    p, lleg, rleg = pushout_simple(span)
    assert "ℕ" not in names(p)
    assert square_commutes(span, lleg, rleg)
    # ℕ's constructors now live in ThMonoid's default
    z = image_ident(rleg, arith.resolve("Z"))
    assert p.termcon(z).type.head == mon.resolve("default")


def test_incompatible_identification(reg):
    s, mon, cat = reg.theory("ThSet"), reg.theory("ThMonoid"), reg.theory("ThCategory")
    right = SimpleMap(s, cat, {s.resolve("default"): cat.resolve("Hom")}, {}, "toHom")
    with pytest.raises(IncompatibleIdentification):
        pushout_simple(Span(s, inclusion_map(s, mon), right))


def test_pushout_along_identity(reg):
    g = reg.theory("ThCategory")
    p, _, _ = pushout_simple(identity_span(g))
    assert alpha_equal_gat(p, g)


def test_coproduct_factors_through_pushout(reg):
    mon, nat, arith = reg.theory("ThMonoid"), reg.theory("ThNat"), reg.theory("ThArith")
    f = reg.map("PlusM")
    g = inclusion_map(nat, arith)
    p, lleg, rleg = pushout_simple(coproduct_span(mon, nat))
    back = {image_ident(rleg, c): c for c, _ in nat.constructors()}
    types = {i for i, _ in p.typecons()}
    med_types, med_terms = {}, {}
    for c, _ in p.constructors():
        target = image_ident(f, c) if c in mon else image_ident(g, back[c])
        (med_types if c in types else med_terms)[c] = target
    med = SimpleMap(p, arith, med_types, med_terms, "mediator")
    assert check_welltyped(med) == []
    for leg, direct, src in ((lleg, f, mon), (rleg, g, nat)):
        via = compose_maps(leg, med)
        for c, _ in src.termcons():
            assert alpha_equal(pushforward(via, generic_term(src, c)), pushforward(direct, generic_term(src, c)))


def test_common_prefix(reg):
    mon, grp = reg.theory("ThMonoid"), reg.theory("ThAdditiveAbelianGroup")
    assert names(common_prefix(mon, grp)) == ["default"]
    assert common_prefix(reg.theory("ThNat"), mon).judgments() == []


# -- using --------------------------------------------------------------------

def test_module_by_using(reg):
    m = reg.theory("ThModule")
    assert {"Scalar", "Vector", "+", "*", "zero", "one", "neg", "⋅"} <= set(names(m))
    assert names(m).count("+") == 2


def test_module_by_pushout_matches_using(reg):
    module, (span, lleg, rleg, _) = module_by_pushout(reg)
    assert alpha_equal_gat(module, reg.theory("ThModule"))
    assert span.apex is EMPTY and square_commutes(span, lleg, rleg)
    assert check_welltyped(rleg) == [] and check_simple_validity(rleg) == []


def test_single_clause_using(reg):
    g = extend_with_using("Copy", [(reg.theory("ThRing"), {})])
    assert alpha_equal_gat(g, reg.theory("ThRing"))
    h = parse_theory("theory Copy2 { using ThRing }", _reg_with(reg, "ThRing"))
    assert alpha_equal_gat(h, reg.theory("ThRing"))


def test_unrenamed_using_shares_default(reg):
    mon, grp, s = reg.theory("ThMonoid"), reg.theory("ThAdditiveAbelianGroup"), reg.theory("ThSet")
    g = extend_with_using("Both", [(mon, {}), (grp, {})])
    assert names(g).count("default") == 1
    explicit, _, _ = pushout_simple(Span(s, inclusion_map(s, mon), inclusion_map(s, grp)))
    assert alpha_equal_gat(g, explicit)


def _reg_with(reg, *theories):
    from gatkit.surface import Registry

    r = Registry()
    for name in theories:
        r.add(name, reg.theory(name))
    return r
