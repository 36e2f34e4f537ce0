"""Clause-set resolution trees, renaming and truth-pattern tools for 3-SAT."""

from .aligned import fgpra_plus, gspra_plus, solve
from .cnf import ClauseSet, Literal, Mapping, OrderClass, classify, normalize, parse_clause_set
from .oracle import Verdict, brute_force_sat, truth_table
from .renaming import cra, cra_plus
from .resolution import gspra

__all__ = [
    "ClauseSet",
    "Literal",
    "Mapping",
    "OrderClass",
    "Verdict",
    "brute_force_sat",
    "classify",
    "cra",
    "cra_plus",
    "fgpra_plus",
    "gspra",
    "gspra_plus",
    "normalize",
    "parse_clause_set",
    "solve",
    "truth_table",
]
