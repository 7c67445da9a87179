"""Certifying solvers and checkers for Dyck-2 reachability and pushdown problems."""
from ._backend import BACKEND
from .certno import (
    DimensionMismatch, NotANoInstance, check_separator_det, check_separator_rand,
    complete_from_MS, extract_separator,
)
from .certyes import (
    NotAYesInstance, TooLong, expand_length, expand_walk, extract_walk_scheme,
    verify_walk_scheme,
)
from .formats import FormatError, parse_document, serialize_document
from .model import (
    Bracket, Concat, Eps, HardestWord, Instance, LabeledGraph, PAutomaton, Pda,
    PdsCertificate, PushdownSystem, Rule, SeparatorBundle, SeparatorMS, Transition, TwoNpda,
    Verdict, Walk, WalkScheme, Wrap,
)
from .pushdown import (
    ConventionViolation, check_pds_certificate, decide_pushdown_reach,
    extract_pds_certificate, pda_emptiness, pda_emptiness_prestar, prestar,
)
from .reductions import (
    SourceEqualsTarget, cfl_to_dyck2, decode_hardest_word, dyck2_to_hardest_word,
    hardest_membership, pda_normalize, pda_to_dyck2, twonpda_recognize, twonpda_word_to_pda,
)
from .solver import SRelation, close, decide

__version__ = "0.1.0"
