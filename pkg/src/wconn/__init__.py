"""Weighted connector algebras over commutative idempotent semirings."""

__version__ = "0.1.0"

from .semiring import (BOOLEAN, FREE, FUZZY, MAX_PLUS, MIN_PLUS, NATURAL, VITERBI, FreeValue,
                       LawReport, Semiring, check_laws, eval_free, format_free, free_add,
                       free_generator, free_mul, get_semiring, parse_free, powerset, sr_add,
                       sr_mul)
from .algebra import (ONE, ZERO, Port, PortSet, Sync, Union, WaiPolynomial, WaiTerm, covers,
                      eval_via_polynomial, evaluate, gamma, normalize, wai_equiv)
from .connectors import (Fusion, Hole, Typed, UnionC, WacTerm, congruence_oracle,
                         congruence_report, congruent, degree, fuse, is_was, is_wat,
                         substitute, syn, translate, trig, wac_equiv)
from .schemes import (atomic_broadcast, broadcast, canonical_gamma, causality_chain,
                      rendezvous, scheme)
from .dsl import parse, parse_wac, parse_wai, pretty

__all__ = [name for name in dir() if not name.startswith("_")]
