"""Satisfiability of linear temporal logic with past over restricted sets of Boolean connectives."""

from .boolfn import NAMED_BASES, Base, BoolFn, load_base, parse_base
from .classify import Complexity, FragmentSpec, Strategy, Verdict, classify
from .deciders import decide, reference_verdict
from .formula import LassoStructure, eval_at, parse, sat_bounded, to_text
from .result import SatResult
from .tableau import decide_tableau

__all__ = [
    "NAMED_BASES",
    "Base",
    "BoolFn",
    "Complexity",
    "FragmentSpec",
    "LassoStructure",
    "SatResult",
    "Strategy",
    "Verdict",
    "classify",
    "decide",
    "decide_tableau",
    "eval_at",
    "load_base",
    "parse",
    "parse_base",
    "reference_verdict",
    "sat_bounded",
    "to_text",
]
