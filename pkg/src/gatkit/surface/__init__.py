"""The ``.gat`` surface language: lexing, parsing, elaboration, printing, JSON."""

from .elaborate import load_source, parse_map, parse_term, parse_theory, parse_type
from .pretty import pretty, pretty_map, pretty_theory, show_term, show_type
from .registry import Registry
from .serialize import from_json, to_json

__all__ = [
    "Registry", "from_json", "load_source", "parse_map", "parse_term", "parse_theory", "parse_type",
    "pretty", "pretty_map", "pretty_theory", "show_term", "show_type", "to_json",
]
