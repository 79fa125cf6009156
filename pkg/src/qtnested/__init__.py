"""Nested sequent proofs for K with quasi-transitivity axioms."""

import sys as _sys

# proof transformations recurse along proof height
if _sys.getrecursionlimit() < 20000:
    _sys.setrecursionlimit(20000)

from .formula import parse_formula, negate, degree
from .sequent import Sequent, parse_sequent, form_of
from .kernel import Proof, Rule, SystemSpec, Family, check

__all__ = [
    "parse_formula",
    "negate",
    "degree",
    "Sequent",
    "parse_sequent",
    "form_of",
    "Proof",
    "Rule",
    "SystemSpec",
    "Family",
    "check",
]
