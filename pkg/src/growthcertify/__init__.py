"""Short free subgroups, law certificates and exact growth for free-by-abelian groups."""
from ._kernel import BACKEND
from .certify import (
    FreeBasis,
    LawCertificate,
    SearchTrace,
    iterated_chain,
    law_certify_general,
    lift_basis,
    two_free_certify,
)
from .extension import ExtElement, ExtensionGroup, GeneratingSet, make_automorphism
from .growth import BallCensus, entropy_bounds, enumerate_ball, subadditivity_check
from .laws import GroupLaw, check_law_on_ball, compose_laws, parse_law
from .stallings import build_graph, classify
from .words import Word, parse_word

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallCensus",
    "ExtElement",
    "ExtensionGroup",
    "FreeBasis",
    "GeneratingSet",
    "GroupLaw",
    "LawCertificate",
    "SearchTrace",
    "Word",
    "build_graph",
    "check_law_on_ball",
    "classify",
    "compose_laws",
    "entropy_bounds",
    "enumerate_ball",
    "iterated_chain",
    "law_certify_general",
    "lift_basis",
    "make_automorphism",
    "parse_law",
    "parse_word",
    "subadditivity_check",
    "two_free_certify",
]
