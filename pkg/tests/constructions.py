"""Explicit theory constructions shared by several test modules."""

from __future__ import annotations

from gatkit.colimits import coproduct_span, pushout_simple, rename_theory
from gatkit.kernel import alpha_equal, generic_term, generic_type
from gatkit.morphisms import compose_maps, pushforward
from gatkit.surface import Registry, parse_theory

SCALAR_MULTIPLICATION = """
  α ⋅ v :: Vector ⊣ [α::Scalar, v::Vector]
  α⋅(u+v) == (α⋅u)+(α⋅v) ⊣ [α::Scalar, (u, v)::Vector]
  (α+β)⋅v == (α⋅v)+(β⋅v) ⊣ [(α, β)::Scalar, v::Vector]
  (α*β)⋅v == α⋅(β⋅v) ⊣ [(α, β)::Scalar, v::Vector]
  one()⋅v == v ⊣ [v::Vector]
"""


def module_by_pushout(reg):
    """ThModule built by hand: rename, glue over the empty theory, extend.

    Returns ``(module, square)`` where ``square`` is ``(span, left leg,
    right leg, pushout)`` for the gluing step.
    """
    ring, _ = rename_theory(reg.theory("ThRing"), {"default": "Scalar"})
    group, _ = rename_theory(reg.theory("ThAdditiveAbelianGroup"), {"default": "Vector"})
    span = coproduct_span(ring, group)
    glued, lleg, rleg = pushout_simple(span, "RingAndGroup")
    scratch = Registry()
    scratch.add("RingAndGroup", glued)
    module = parse_theory("theory ThModuleByHand extends RingAndGroup {" + SCALAR_MULTIPLICATION + "}", scratch)
    return module, (span, lleg, rleg, glued)


def square_commutes(span, lleg, rleg) -> bool:
    """Both routes around the square agree on every apex generic term and type."""
    top = compose_maps(span.left, lleg)
    bottom = compose_maps(span.right, rleg)
    generics = [generic_type(span.apex, i) for i, _ in span.apex.typecons()]
    generics += [generic_term(span.apex, i) for i, _ in span.apex.termcons()]
    return all(alpha_equal(pushforward(top, x), pushforward(bottom, x)) for x in generics)
