"""Exact-arithmetic computations with modules over finite EI-categories:
truncated instance families, the duality-twisted functor pair with its
adjunction, and certified injective resolutions.
"""

from .eicat import FiniteEICategory
from .exactla import ExactMatrix, Q, kernel_of_rows, solve
from .instances import (
    FiniteGroup,
    InstanceSpec,
    cyclic_group,
    fi_g_truncation,
    trivial_group,
    viq_truncation,
)
from .nakayama import (
    NakayamaResult,
    Presentation,
    adjunction_backward,
    adjunction_check,
    adjunction_forward,
    counit,
    in_kernel,
    inverse_nakayama,
    locally_self_injective_audit,
    nakayama,
    stabilized_nakayama,
    triangle_identities,
    unit,
)
from .repmod import (
    CatModule,
    ChainComplex,
    ModuleHom,
    canonical_cover,
    concentrated_module,
    direct_sum,
    dualize,
    extend_by_zero,
    find_isomorphism,
    free_module,
    hom_basis,
    hom_space,
    is_injective,
    is_projective,
    is_torsion_free,
    kernel_module,
    quotient_by_subspaces,
    restrict,
    sequence_is_exact,
    submodule_spanned,
    tensor_induce,
    validate_module,
    zero_module,
)
from .resolve import injective_resolution, resolution_step, verify_resolution

__all__ = [
    "CatModule",
    "ChainComplex",
    "ExactMatrix",
    "FiniteEICategory",
    "FiniteGroup",
    "InstanceSpec",
    "ModuleHom",
    "NakayamaResult",
    "Presentation",
    "Q",
    "adjunction_backward",
    "adjunction_check",
    "adjunction_forward",
    "canonical_cover",
    "concentrated_module",
    "counit",
    "cyclic_group",
    "direct_sum",
    "dualize",
    "extend_by_zero",
    "fi_g_truncation",
    "find_isomorphism",
    "free_module",
    "hom_basis",
    "hom_space",
    "in_kernel",
    "injective_resolution",
    "inverse_nakayama",
    "is_injective",
    "is_projective",
    "is_torsion_free",
    "kernel_module",
    "kernel_of_rows",
    "locally_self_injective_audit",
    "nakayama",
    "quotient_by_subspaces",
    "resolution_step",
    "restrict",
    "sequence_is_exact",
    "solve",
    "stabilized_nakayama",
    "submodule_spanned",
    "tensor_induce",
    "triangle_identities",
    "trivial_group",
    "unit",
    "validate_module",
    "verify_resolution",
    "viq_truncation",
    "zero_module",
]
