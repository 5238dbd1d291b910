"""Generalized algebraic theories with hygienic scopes, models and theory maps."""

from .colimits import Span, pushout_simple, rename_theory
from .errors import GatError
from .kernel import alpha_equal, alpha_equal_gat, equal_upto_norm, infer_sort, infer_type, normalize
from .models import CheckError, Model, check_axioms, eval_term, free_model
from .morphisms import (
    GeneralMap,
    IdMap,
    InclMap,
    SimpleMap,
    check_axiom_preservation,
    check_simple_validity,
    check_welltyped,
    compose_maps,
    migrate_model,
    pushforward,
)
from .scopes import Ident, ScopeTag, fresh_tag
from .stdlib import build_model, load_stdlib
from .surface import from_json, parse_map, parse_term, parse_theory, pretty, to_json
from .syntax import GAT, AlgType, App, TermInCtx, TypeCtx, TypeInCtx, Var

__version__ = "0.1.0"

__all__ = [
    "GAT", "AlgType", "App", "CheckError", "GatError", "GeneralMap", "IdMap", "Ident", "InclMap",
    "Model", "ScopeTag", "SimpleMap", "Span", "TermInCtx", "TypeCtx", "TypeInCtx", "Var",
    "alpha_equal", "alpha_equal_gat", "build_model", "check_axiom_preservation", "check_axioms",
    "check_simple_validity", "check_welltyped", "compose_maps", "equal_upto_norm", "eval_term",
    "free_model", "fresh_tag", "from_json", "infer_sort", "infer_type", "load_stdlib",
    "migrate_model", "normalize", "parse_map", "parse_term", "parse_theory", "pretty",
    "pushforward", "pushout_simple", "rename_theory", "to_json",
]
