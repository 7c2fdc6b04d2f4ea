"""Distributional estimates for dichotomised continuous outcomes.

Proportions below/above a clinical cut-point, and the difference in
proportions, risk ratio and odds ratio between two groups, with
delta-method standard errors under normal, skew-normal and gamma outcome
models, plus regression-adjusted comparisons.
"""

from ._core import (
    ComparisonResult,
    EffectRow,
    GroupResult,
    GroupSummary,
    TTestResult,
    adjusted_comparisons,
    dist_gamma,
    dist_normal,
    dist_skewnormal,
    fit_gamma_shape,
    fit_sn_shape,
    gamma_cdf,
    normal_cdf,
    normal_quantile,
    owens_t,
    pooled_sd,
    reg_beta,
    reg_gamma_lower,
    run_scenario,
    sn_cdf,
    t_test,
    welch_df,
)

__all__ = [
    "ComparisonResult",
    "EffectRow",
    "GroupResult",
    "GroupSummary",
    "TTestResult",
    "adjusted_comparisons",
    "dist_gamma",
    "dist_normal",
    "dist_skewnormal",
    "fit_gamma_shape",
    "fit_sn_shape",
    "gamma_cdf",
    "normal_cdf",
    "normal_quantile",
    "owens_t",
    "pooled_sd",
    "reg_beta",
    "reg_gamma_lower",
    "run_scenario",
    "sn_cdf",
    "t_test",
    "welch_df",
]

__version__ = "0.1.0"
