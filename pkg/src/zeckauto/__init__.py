"""Automata for additive number theory in Fibonacci and Tribonacci numeration."""

from .automata import Automaton, classify, enumerate_values, equivalent
from .counting import build_counter, evaluate
from .logic import compile_formula, parse_formula
from .numeration import FIB, TRIB, decode, encode
from .regexlang import compile_regex
from .script import Session, run_script

__version__ = "0.1.0"

__all__ = [
    "Automaton", "FIB", "TRIB", "Session", "build_counter", "classify", "compile_formula",
    "compile_regex", "decode", "encode", "enumerate_values", "equivalent", "evaluate",
    "parse_formula", "run_script",
]
