"""Models of theories: the coercion-style interface, built-ins, free models."""

from .axioms import DEFAULT_BOUND, AxiomReport, AxiomResult, check_axioms
from .base import CheckError, IncompleteModel, Model, eval_term, fail, parse_literal, show_value
from .builtin import FinFunction, FinSet, SliceOb, erase
from .free import FreeModel, Symbolic, free_model

__all__ = [
    "DEFAULT_BOUND", "AxiomReport", "AxiomResult", "CheckError", "FinFunction", "FinSet",
    "FreeModel", "IncompleteModel", "Model", "SliceOb", "Symbolic", "check_axioms", "erase",
    "eval_term", "fail", "free_model", "parse_literal", "show_value",
]
