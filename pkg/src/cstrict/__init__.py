"""Bounded verification of C-system strictification.

The package builds, from a graded C-system and a functor into an ambient
category, the image C-system, the presheaf universe obtained by extending
the standard one along the inclusion, and the induced homomorphism of
generated C-systems; it then certifies on finite fragments that the
original functor and the strictified homomorphism agree up to an explicit
natural isomorphism.
"""

from .ambient import AmbientCategory, AmbientPatch, corestriction
from .catkernel import (
    CommaCategory,
    ComputableCategory,
    FiniteAsComputable,
    FiniteCategory,
    FunctorData,
    comma_category,
    comma_to_finite,
    compose_functors,
    is_filtered,
    probe_fragment,
    validate_finite_category,
    validate_functor,
)
from .csystem import (
    CSystem,
    CSystemHom,
    builtin_csystem,
    mutate,
    validate_c0,
    validate_csystem,
    validate_homomorphism,
)
from .image import (
    check_injective_on_morphisms,
    image_csystem,
    inclusion_functor,
    restricted_hom,
)
from .kan import (
    ColimitPresentation,
    LanUniverse,
    SetDiagram,
    comma_filtered_report,
    lan_extend,
    lan_extend_morphism,
    preservation_report,
    rho_representable,
    set_colimit,
    stabilization_probe,
    validate_set_diagram,
)
from .pipeline import (
    GateFailure,
    StrictifyJob,
    TheoremReport,
    final_iso,
    run_pipeline,
    strictify,
    tau_isos,
    verify_theorem,
)
from .presheaf import (
    NaturalIso,
    Presheaf,
    PresheafMorphism,
    canonical_pullback,
    compose_morphisms,
    identity_morphism,
    pointwise_iso_check,
    terminal_presheaf,
    validate_naturality,
    yoneda,
    yoneda_element,
    yoneda_map,
)
from .report import (
    CertificationError,
    Check,
    MalformedInputError,
    Report,
    merge_reports,
)
from .universe import (
    GeneratedCategory,
    GeneratedObject,
    LiftedHom,
    UniverseCategory,
    generated_csystem,
    hom_from_universe_morphism,
    lan_universe,
    psi_chain,
    standard_universe,
    validate_universe_morphism,
)

__all__ = [
    "AmbientCategory",
    "AmbientPatch",
    "CertificationError",
    "Check",
    "ColimitPresentation",
    "CommaCategory",
    "ComputableCategory",
    "CSystem",
    "CSystemHom",
    "FiniteAsComputable",
    "FiniteCategory",
    "FunctorData",
    "GateFailure",
    "GeneratedCategory",
    "GeneratedObject",
    "LanUniverse",
    "LiftedHom",
    "MalformedInputError",
    "NaturalIso",
    "Presheaf",
    "PresheafMorphism",
    "Report",
    "SetDiagram",
    "StrictifyJob",
    "TheoremReport",
    "UniverseCategory",
    "builtin_csystem",
    "canonical_pullback",
    "check_injective_on_morphisms",
    "comma_category",
    "comma_filtered_report",
    "comma_to_finite",
    "compose_functors",
    "compose_morphisms",
    "corestriction",
    "final_iso",
    "generated_csystem",
    "hom_from_universe_morphism",
    "identity_morphism",
    "image_csystem",
    "inclusion_functor",
    "is_filtered",
    "lan_extend",
    "lan_extend_morphism",
    "lan_universe",
    "merge_reports",
    "mutate",
    "pointwise_iso_check",
    "preservation_report",
    "probe_fragment",
    "psi_chain",
    "restricted_hom",
    "rho_representable",
    "run_pipeline",
    "set_colimit",
    "stabilization_probe",
    "standard_universe",
    "strictify",
    "tau_isos",
    "terminal_presheaf",
    "validate_c0",
    "validate_csystem",
    "validate_finite_category",
    "validate_functor",
    "validate_homomorphism",
    "validate_naturality",
    "validate_set_diagram",
    "validate_universe_morphism",
    "verify_theorem",
    "yoneda",
    "yoneda_element",
    "yoneda_map",
]

__version__ = "0.1.0"
