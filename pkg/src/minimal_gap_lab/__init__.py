"""Desk-scale verification toolkit for minimal surfaces in unit spheres.

Combines an exact rational polynomial identity checker with a jet-based
numerical geometry pipeline over a catalog of explicit minimal immersions,
and certifies the gap/pinching bounds those surfaces are subject to.
"""

from minimal_gap_lab.errors import (
    DomainError,
    FrameError,
    InvariantViolation,
    MinimalGapError,
    ParseError,
    ValidationError,
)
from minimal_gap_lab.gaps import (
    TAU_STAR,
    CalabiConstants,
    GapCertificate,
    PinchingRoots,
    ThresholdTable,
    calabi_constants,
    certify,
    pinching_roots,
    pinching_table,
    threshold_T,
    threshold_table,
)
from minimal_gap_lab.geoquad import (
    IntegralReport,
    QuadratureGrid,
    SurfaceFields,
    build_grid,
    evaluate_fields,
    integral_report,
    integrate,
)
from minimal_gap_lab.identities import (
    IdentityReport,
    SymbolFamily,
    check_b2_decomposition,
    check_eigen_charpoly,
    check_gap_factorizations,
    check_invariant_identities,
    check_third_order_contractions,
    run_identity_suite,
)
from minimal_gap_lab.invariants import (
    FundamentalMatrix,
    PointInvariants,
    b1_cross_check,
    b1_simons,
    fundamental_matrix,
    laplace_beltrami,
    point_invariants,
)
from minimal_gap_lab.ratpoly import (
    RatPoly,
    Rational,
    poly_combine,
    poly_diff,
    poly_is_zero,
)
from minimal_gap_lab.surfaces import (
    CATALOG_NAMES,
    CovariantGradH,
    FrameData,
    ImmersionSpec,
    Jet,
    ShapePair,
    adapted_frame,
    catalog_entry,
    covariant_grad_h,
    eval_jet,
    load_immersion,
    second_fundamental_form,
    serialize_spec,
    validate_spec,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "CalabiConstants",
    "CovariantGradH",
    "DomainError",
    "FrameData",
    "FrameError",
    "FundamentalMatrix",
    "GapCertificate",
    "IdentityReport",
    "ImmersionSpec",
    "IntegralReport",
    "InvariantViolation",
    "Jet",
    "MinimalGapError",
    "ParseError",
    "PinchingRoots",
    "PointInvariants",
    "QuadratureGrid",
    "RatPoly",
    "Rational",
    "ShapePair",
    "SurfaceFields",
    "SymbolFamily",
    "TAU_STAR",
    "ThresholdTable",
    "ValidationError",
    "adapted_frame",
    "b1_cross_check",
    "b1_simons",
    "build_grid",
    "calabi_constants",
    "catalog_entry",
    "certify",
    "check_b2_decomposition",
    "check_eigen_charpoly",
    "check_gap_factorizations",
    "check_invariant_identities",
    "check_third_order_contractions",
    "covariant_grad_h",
    "eval_jet",
    "evaluate_fields",
    "fundamental_matrix",
    "integral_report",
    "integrate",
    "laplace_beltrami",
    "load_immersion",
    "pinching_roots",
    "pinching_table",
    "point_invariants",
    "poly_combine",
    "poly_diff",
    "poly_is_zero",
    "run_identity_suite",
    "second_fundamental_form",
    "serialize_spec",
    "threshold_T",
    "threshold_table",
    "validate_spec",
]
