"""Sheaf codes on graded posets: construction, extendability, cohomology and expansion."""

from .errors import BudgetExceeded, FieldMismatch, HierarchyError
from .fields import Field, FieldElement, get_field
from .matrices import Matrix
from .posets import GradedPoset, OpenSet
from .codes import CssCode, LinearCode
from .sheaves import SheafCode
from .extendability import GenericSheafCode, is_extendable, is_me, me_certify
from .homology import CochainComplex, cohomology_dim, css_from_cohomology
from .expansion import cheeger, eta

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "FieldMismatch", "HierarchyError", "Field", "FieldElement", "get_field",
    "Matrix", "GradedPoset", "OpenSet", "CssCode", "LinearCode", "SheafCode",
    "GenericSheafCode", "is_extendable", "is_me", "me_certify", "CochainComplex",
    "cohomology_dim", "css_from_cohomology", "cheeger", "eta",
]
