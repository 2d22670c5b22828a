"""Affine Hecke algebra of GL(m) in the Bernstein presentation, small rank."""

from .algebra import Q, HeckeElement
from .laurent import LaurentPoly
from .modules import (
    CentralQuotient, FiniteModule, RelationReport, SignInducedModule, central_quotient,
    principal_series, sign_isotypic_dim, steinberg_module, verify_relations,
)

__all__ = [
    "Q", "HeckeElement", "LaurentPoly", "SignInducedModule", "FiniteModule",
    "principal_series", "steinberg_module", "sign_isotypic_dim", "central_quotient",
    "CentralQuotient", "verify_relations", "RelationReport",
]
