"""Exact combinatorics for Ext-branching from GL(n+1) to GL(n).

Segments and multisegments, Bernstein-Zelevinsky derivatives, recombination,
quotient-obstruction and Ext-vanishing certificates, and small-rank affine
Hecke algebra checks.
"""

from .branching import (
    Certificate, bz_filtration, ep_pairing, ext_vanishing_certificate, extract_linked_pair,
    generic_subquotients_of_derivative, m_count, quotient_obstruction,
)
from .derivatives import (
    check_derivative_duality, derive_product, derive_st_segment, derive_zel_segment, whittaker_dim,
)
from .recombination import (
    is_generic, linked, recombine, truncations, union_intersection, verify_truncation_lemma,
)
from .segments import (
    RHO, CuspidalLine, CuspidalPoint, DomainError, Flavor, FormalSum, InducedRep, Multisegment,
    Segment, Side, dual, ms, seg, support, truncate_left, truncate_right, unit_rep,
)

__version__ = "0.1.0"

__all__ = [
    "RHO", "CuspidalLine", "CuspidalPoint", "Segment", "Multisegment", "InducedRep", "FormalSum",
    "Flavor", "Side", "DomainError", "seg", "ms", "support", "dual", "unit_rep",
    "truncate_left", "truncate_right", "linked", "union_intersection", "is_generic", "recombine",
    "truncations", "verify_truncation_lemma", "derive_zel_segment", "derive_st_segment",
    "derive_product", "whittaker_dim", "check_derivative_duality", "bz_filtration",
    "generic_subquotients_of_derivative", "quotient_obstruction", "ext_vanishing_certificate",
    "extract_linked_pair", "m_count", "ep_pairing", "Certificate",
]
