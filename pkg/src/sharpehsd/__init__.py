"""Post-hoc range test on Sharpe ratios under an equicorrelated returns model."""

__version__ = "0.1.0"

from .corr_model import (
    CorrModel,
    estimate_rho_median,
    inv_sqrt_rank_one,
    make_ar1,
    make_rank_one,
    sample_correlation,
)
from .estimator import SharpeRangePosthoc
from .posthoc import (
    CutoffSpec,
    PosthocReport,
    analyze,
    bonferroni_cutoff,
    global_equality_test,
    hsd_cutoff,
    paired_diff_params,
    pairwise_decisions,
    range_pvalue,
)
from .range_dist import (
    INFINITE_DF,
    ptukey,
    qtukey,
    range_cdf_inf,
    std_normal_cdf,
    std_normal_quantile,
)
from .sr_core import (
    ReturnsPanel,
    SrEstimate,
    annualize,
    sharpe_ratios,
    sr_covariance,
    sr_from_summary,
    z_transform,
)

__all__ = [
    "__version__",
    "CorrModel",
    "CutoffSpec",
    "INFINITE_DF",
    "PosthocReport",
    "ReturnsPanel",
    "SharpeRangePosthoc",
    "SrEstimate",
    "analyze",
    "annualize",
    "bonferroni_cutoff",
    "estimate_rho_median",
    "global_equality_test",
    "hsd_cutoff",
    "inv_sqrt_rank_one",
    "make_ar1",
    "make_rank_one",
    "paired_diff_params",
    "pairwise_decisions",
    "ptukey",
    "qtukey",
    "range_cdf_inf",
    "range_pvalue",
    "sample_correlation",
    "sharpe_ratios",
    "sr_covariance",
    "sr_from_summary",
    "std_normal_cdf",
    "std_normal_quantile",
    "z_transform",
]
