"""Bounded and decidable computations in free lattices, free monoids and free rings."""

from .ideals import monomial_ideal_member, verify_intersection_generation
from .lattice import (LatticeTerm, explain_leq, gen, join, lattice_eval, meet, parse_lattice_term,
                      whitman_leq, xyz_claims, xyz_sequence)
from .monoid import (NotWithinBounds, Related, RewritePresentation, check_cong_join_claim, monoid_relate,
                     vector_monoid_analysis)

__all__ = [
    "LatticeTerm", "gen", "meet", "join", "parse_lattice_term", "whitman_leq", "explain_leq",
    "lattice_eval", "xyz_sequence", "xyz_claims", "RewritePresentation", "Related", "NotWithinBounds",
    "monoid_relate", "check_cong_join_claim", "vector_monoid_analysis", "monomial_ideal_member",
    "verify_intersection_generation",
]
