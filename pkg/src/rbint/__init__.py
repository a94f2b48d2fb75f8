"""Exact formal integration of Rota-Baxter operators on nilpotent Lie algebras."""
from .lie_core import (
    LieAlgebra,
    LieElement,
    Subspace,
    adapted_frame,
    bracket,
    extend_by_polynomial_filtration,
    filtration_degree,
    lower_central_series,
    validate,
)
from .free_lie import build_free_nilpotent, hall_trees
from .rota_baxter import (
    LinearOperator,
    RBLieAlgebra,
    conjugate,
    descendant,
    minimal_invariant_subalgebra,
    splitting_rb,
    verify_rb_weight1,
)
from .uea import UEA, NotGroupLike
from .group_rb import (
    BCHGroup,
    RBGroupOperator,
    bch,
    brace,
    closed_formula,
    integrate_rb,
    integrate_via_magnus,
    magnus,
    special_cases,
)
from .graded import FilteredGroup, GradedLieRing, graded_rb, graded_ring, group_commutator, verify_iso

__version__ = "0.1.0"
