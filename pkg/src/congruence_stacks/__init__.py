"""Unimodal stacks whose left parts and peak lie in r mod m and right parts in -r mod m.

Exact counting (generating functions and a direct dynamic-programming oracle),
the false-theta decomposition of the two-variable sum, and circle-method
asymptotics with high-precision verification of the modular ingredients.
"""

from .params import StackParams, Variant
from .qseries import (
    TruncatedSeries,
    DecompositionReport,
    stack_gf,
    congruence_partition_gf,
    false_theta_gf,
    correction_gf,
    correction_support,
    verify_decomposition,
    series_to_json,
    series_from_json,
    evaluate,
)
from .oracle import (
    StackWitness,
    count_stacks,
    enumerate_stacks,
    witnesses_to_json,
    witnesses_from_json,
)
from .bigfloat import LogValue10
from .asymptotics import (
    ArcContext,
    RefinedEstimate,
    ComparisonRecord,
    saddle_point,
    growth_scale,
    bessel_i,
    main_term,
    refined_main_term,
    auluck_main_term,
    singular_expansion_coeffs,
    asymptotic_sum,
    comparison_table,
    records_to_csv,
    records_to_json,
)
from .analytic import (
    DecayFit,
    RemainderCheck,
    CircleProfile,
    theta_sum,
    theta_product,
    theta_transform_residual,
    dedekind_eta,
    eta_inversion_residual,
    congruence_product,
    congruence_product_main,
    product_residual,
    product_decay_fit,
    false_theta,
    cubic_model,
    cubic_remainder_check,
    false_theta_series_residual,
    simpson_refine,
    major_arc_integral,
    circle_profile,
)

__version__ = "0.1.0"

__all__ = [
    "StackParams",
    "Variant",
    "TruncatedSeries",
    "DecompositionReport",
    "stack_gf",
    "congruence_partition_gf",
    "false_theta_gf",
    "correction_gf",
    "correction_support",
    "verify_decomposition",
    "series_to_json",
    "series_from_json",
    "evaluate",
    "StackWitness",
    "count_stacks",
    "enumerate_stacks",
    "witnesses_to_json",
    "witnesses_from_json",
    "LogValue10",
    "ArcContext",
    "RefinedEstimate",
    "ComparisonRecord",
    "saddle_point",
    "growth_scale",
    "bessel_i",
    "main_term",
    "refined_main_term",
    "auluck_main_term",
    "singular_expansion_coeffs",
    "asymptotic_sum",
    "comparison_table",
    "records_to_csv",
    "records_to_json",
    "DecayFit",
    "RemainderCheck",
    "CircleProfile",
    "theta_sum",
    "theta_product",
    "theta_transform_residual",
    "dedekind_eta",
    "eta_inversion_residual",
    "congruence_product",
    "congruence_product_main",
    "product_residual",
    "product_decay_fit",
    "false_theta",
    "cubic_model",
    "cubic_remainder_check",
    "false_theta_series_residual",
    "simpson_refine",
    "major_arc_integral",
    "circle_profile",
]
