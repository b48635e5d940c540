"""Exact computations with polyadic (n-ary) groups over free-group words."""

from .core import (
    AxiomFailure,
    FiniteNaryTable,
    HGTriple,
    PolyadicError,
    centered_retract,
    cyclic_b_derived,
    detect_nary_identity,
    eval_derived,
    retract,
    skew,
    solve,
    verify_axioms,
)
from .free import FreePolyadicGroup, PostCover, basis_pipeline, cover_extend, extract_hg, f_free, skew_free
from .freeness import FreenessQuery, FreenessReport, check_rank_condition, decide, search_witnesses
from .subgroups import CosetMap, fold, is_basis_of_whole_group, member, schreier_basis, schreier_transversal
from .words import Alphabet, Homomorphism, ParseError, Word, WordError, WordGroup, apply, ht, parse, render

__version__ = "0.1.0"
