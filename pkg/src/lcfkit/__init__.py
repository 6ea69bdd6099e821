"""lcfkit: an LCF-style interactive theorem prover for simply typed
higher-order logic.

The kernel (lcfkit.kernel) is the only module that can construct theorems;
proof search, the simplifier and the decision procedures all justify their
answers by replay through it.
"""

from . import automation, base, errors, kernel, proof, session, store, syntax, terms, unify
from .base import base_theory, core_theory
from .kernel import Theorem, Theory, new_theory
from .proof import ProofState, Rule, Tactic, derive_rule, init_proof, qed, undo
from .syntax import parse_formula, parse_tactic, parse_term, parse_theory, print_term

__all__ = [
    "Theorem",
    "Theory",
    "ProofState",
    "Rule",
    "Tactic",
    "automation",
    "base",
    "base_theory",
    "core_theory",
    "derive_rule",
    "errors",
    "init_proof",
    "kernel",
    "new_theory",
    "parse_formula",
    "parse_tactic",
    "parse_term",
    "parse_theory",
    "print_term",
    "proof",
    "qed",
    "session",
    "store",
    "syntax",
    "terms",
    "undo",
    "unify",
]

__version__ = "0.1.0"
