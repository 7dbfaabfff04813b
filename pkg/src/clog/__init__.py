"""Interpreter and cross-semantics workbench for causal effect expressions,
FO(C-Log) theories and E-disjunctive logic programs."""

__version__ = "0.1.0"

from .bridge import analyze, compare_semantics, fo_weakening, translate_to_foclog
from .edlp import ground_program, is_stable, minus_set, stable_models
from .engine import (
    DEFAULT_BUDGET,
    check_model,
    enumerate_csets,
    enumerate_models,
    run_process,
)
from .logic import Structure, Vocabulary, default_state, evaluate_formula
from .parser import ParseError, parse_clog, parse_edlp, parse_file, parse_foclog, parse_formula
from .render import render
from .syntax import CausalTheory, EDisjProgram, FOClogTheory, classify_symbols

__all__ = [
    "DEFAULT_BUDGET",
    "CausalTheory",
    "EDisjProgram",
    "FOClogTheory",
    "ParseError",
    "Structure",
    "Vocabulary",
    "analyze",
    "check_model",
    "classify_symbols",
    "compare_semantics",
    "default_state",
    "enumerate_csets",
    "enumerate_models",
    "evaluate_formula",
    "fo_weakening",
    "ground_program",
    "is_stable",
    "minus_set",
    "parse_clog",
    "parse_edlp",
    "parse_file",
    "parse_foclog",
    "parse_formula",
    "render",
    "run_process",
    "stable_models",
    "translate_to_foclog",
]
