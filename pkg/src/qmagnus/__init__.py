"""Truncated Magnus representations, finite p-quotients and mod-p Betti
number approximations for free groups, free Q-groups and their root and
centralizer extensions."""

from .errors import (
    CapExceeded,
    DomainMismatch,
    MagnusError,
    NotInvertible,
    ParseError,
    PrecisionExhausted,
    RelatorViolation,
    UnknownGenerator,
)
from .scalars import GF, QQ, PrimeFieldElem, TruncatedPadic, Zmod, binomial, legendre_valuation
from .series import SeriesRing, TruncatedSeries
from .wordexpr import free_reduce, parse, substitute, to_text
from .magnus import MagnusContext, certify_nontrivial, evaluate, nilpotence_witness
from .pquot import build_quotient, check_density, check_relators, hom_from_words
from .foxrank import (
    GroupRingElem,
    GroupRingMatrix,
    Presentation,
    beta1_sequence,
    fox_derivative,
    induce_matrix,
    rank_fp,
    sylvester_axiom_suite,
    sylvester_rank,
)
from .extcheck import (
    EmbeddedPresentation,
    ExtensionSpec,
    amalgam_check,
    extend_presentation,
    free_base,
    strong_embedding_probe,
)

__version__ = "0.1.0"
