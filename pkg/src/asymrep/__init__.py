"""Asymptotic representations from integer 2-cocycles and their trace-of-log pairing."""

from .cocycles import sigma_catmap, sigma_nilpotent5, sigma_z2
from .errors import AsymRepError
from .exact import IntMatrix, Rational, Residue, binomial_poly, matrix_order_mod, rational_mod_reduce, s_k
from .groups import (
    GroupDescriptor,
    GroupElement,
    QuotientMap,
    enumerate_elements,
    finite_quotient,
    make_catmap,
    make_nilpotent5,
    make_z2,
)
from .homology import (
    Chain,
    Cochain,
    boundary2,
    boundary3,
    coboundary1,
    coboundary2,
    hopf_cycle,
    is_cocycle,
    pair,
)
from .induced import compare_with_formula, heisenberg_mod, induce_character
from .numerics import MonomialMatrix, kron, lemma_anal_harness, op_norm, principal_log, trace_log
from .reps import (
    AsymRepSpec,
    BuiltRep,
    PairingReport,
    build_reduced_rep,
    build_rep,
    multiplicativity_defect,
    obstruction_certificate,
    predicted_pairing,
    rep_pairing,
    scalar_defect,
)

__version__ = "0.1.0"
