"""Modal logics without necessitation, decided through finite Nmatrices.

The twelve systems (Tm, Dm, Km and their 4/45 extensions, plus the
deterministic-implication family Tmd) each come with a built-in Nmatrix,
a Hilbert calculus, and a decision procedure for consequence.
"""

from mnm.calculus import Derivation, axioms_of, check_derivation, deduction_transform
from mnm.nmatrix import SYSTEM_IDS, Multialgebra, Nmatrix, builtin
from mnm.semantics import (
    Valuation,
    Verdict,
    audit_system,
    brute_force_consequence,
    decide_consequence,
    decide_valid,
)
from mnm.syntax import Atom, Box, Dia, Formula, Imp, Neg, Sequent, parse, render
from mnm.values import TruthValue

__version__ = "0.1.0"

__all__ = [
    "Atom", "Box", "Dia", "Imp", "Neg", "Formula", "Sequent", "parse", "render",
    "TruthValue", "Multialgebra", "Nmatrix", "SYSTEM_IDS", "builtin",
    "Valuation", "Verdict", "decide_consequence", "decide_valid", "brute_force_consequence", "audit_system",
    "Derivation", "axioms_of", "check_derivation", "deduction_transform",
]
