"""The post-hoc range test on Sharpe ratios: cutoffs, p-values, decisions.

The honest-significant-difference cutoff rescales a studentized-range
quantile by sqrt((1-rho)/n) (df=inf) or sqrt((1-rho)/(n-1)) (df=n-1).  A
global chi-square equality test precedes the pairwise procedure.  All cutoffs
are computed in per-period Sharpe units and annualized only for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from . import range_dist
from .corr_model import CorrModel
from .sr_core import SIMPLE, SrEstimate, annualize, sr_covariance

__all__ = [
    "DF_INF",
    "DF_N_MINUS_1",
    "RHO_ASSUMED",
    "RHO_ESTIMATED",
    "CutoffSpec",
    "PosthocReport",
    "hsd_cutoff",
    "bonferroni_cutoff",
    "range_pvalue",
    "pairwise_decisions",
    "global_equality_test",
    "paired_diff_params",
    "analyze",
]

DF_INF = "inf"
DF_N_MINUS_1 = "n-1"
RHO_ASSUMED = "assumed"
RHO_ESTIMATED = "estimated"


@dataclass(frozen=True)
class CutoffSpec:
    """Everything needed to price a range cutoff: level, df mode, rho, k, n."""

    alpha: float
    k: int
    n: int
    rho: float
    df_mode: str = DF_N_MINUS_1

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.df_mode not in (DF_INF, DF_N_MINUS_1):
            raise ValueError(f"df_mode must be {DF_INF!r} or {DF_N_MINUS_1!r}")
        lo = -1.0 / (self.k - 1)
        if not (lo < self.rho < 1.0):
            raise ValueError(f"rho={self.rho} outside the PD range ({lo}, 1) for k={self.k}")

    @property
    def df(self) -> float:
        return float(self.n - 1) if self.df_mode == DF_N_MINUS_1 else math.inf

    @property
    def scale(self) -> float:
        denom = self.n - 1 if self.df_mode == DF_N_MINUS_1 else self.n
        return math.sqrt((1.0 - self.rho) / denom)


def hsd_cutoff(spec: CutoffSpec) -> float:
    """Honest-significant-difference cutoff in per-period Sharpe units."""
    q = range_dist.qtukey(1.0 - spec.alpha, spec.k, spec.df)
    return q * spec.scale


def bonferroni_cutoff(alpha: float, k: int, n: int, rho: float) -> float:
    """Pairwise normal cutoff with alpha split across all k-choose-2 comparisons."""
    spec = CutoffSpec(alpha=alpha, k=k, n=n, rho=rho)  # reuse validation
    n_pairs = math.comb(k, 2)
    z = range_dist.std_normal_quantile(1.0 - spec.alpha / n_pairs)
    return math.sqrt(2.0 * (1.0 - rho) / n) * z


def range_pvalue(observed_range, spec: CutoffSpec):
    """P-value of an observed Sharpe-ratio range under the null of equal SNRs."""
    obs = np.asarray(observed_range, dtype=float)
    if np.any(np.isnan(obs)) or np.any(obs < 0):
        raise ValueError("observed_range must be nonnegative")
    p = 1.0 - range_dist.ptukey(obs / spec.scale, spec.k, spec.df)
    return float(p) if np.ndim(observed_range) == 0 else p


def pairwise_decisions(sr, cutoff: float) -> np.ndarray:
    """Boolean k x k matrix: entry (i, j) true iff |sr_i - sr_j| >= cutoff."""
    if cutoff <= 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    values = sr.sr if isinstance(sr, SrEstimate) else np.asarray(sr, dtype=float)
    diff = np.abs(values[:, None] - values[None, :])
    decisions = diff >= cutoff
    np.fill_diagonal(decisions, False)
    return decisions


def global_equality_test(
    est: SrEstimate, model: CorrModel, form: str = SIMPLE
) -> tuple[float, int, float]:
    """Chi-square test that all population SNRs are equal.

    Uses successive-difference contrasts D on the Sharpe vector with the
    asymptotic covariance; returns (statistic, degrees of freedom, p-value).
    """
    if est.annualized:
        raise ValueError("global_equality_test expects per-period Sharpe ratios")
    k = est.k
    if k < 2:
        raise ValueError("need at least 2 assets")
    d = np.eye(k - 1, k) - np.eye(k - 1, k, k=1)
    sigma = sr_covariance(est.sr, model, est.n, form)
    contrast_cov = d @ (est.n * sigma) @ d.T
    cond = np.linalg.cond(contrast_cov)
    if not np.isfinite(cond) or cond > 1e12:
        raise RuntimeError(
            f"contrast covariance is numerically singular (condition number {cond:.3e})"
        )
    delta = d @ est.sr
    stat = float(est.n * delta @ np.linalg.solve(contrast_cov, delta))
    df = k - 1
    return stat, df, float(chi2.sf(stat, df))


def paired_diff_params(snr: float, eps: float, rho: float, n: int) -> tuple[float, float]:
    """Mean and variance of the Sharpe-ratio difference of two correlated assets.

    The assets have SNRs snr*(1+eps) and snr; the difference is approximately
    normal with mean eps*snr and the variance below.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    mean = eps * snr
    var = 2.0 * (1.0 - rho) / n + (snr**2 / (2.0 * n)) * (
        1.0 + (1.0 + eps) ** 2 - 2.0 * rho**2 * (1.0 + eps)
    )
    return mean, var


@dataclass(frozen=True)
class PosthocReport:
    """Full result of the global test plus the post-hoc range procedure.

    Sharpe ratios, the observed range, and all cutoffs are reported
    annualized; the decision matrix uses the df-mode-selected cutoff.
    """

    sr: SrEstimate
    rho_used: float
    rho_source: str
    alpha: float
    df_mode: str
    observed_range: float
    hsd_inf: float
    hsd_ndf: float
    bc: float
    range_pvalue: float
    decisions: np.ndarray
    global_stat: float
    global_df: int
    global_pvalue: float
    warnings: tuple[str, ...] = field(default=())

    @property
    def selected_cutoff(self) -> float:
        return self.hsd_ndf if self.df_mode == DF_N_MINUS_1 else self.hsd_inf

    def rejected_pairs(self) -> list[tuple[str, str]]:
        names = self.sr.asset_names
        i_idx, j_idx = np.nonzero(np.triu(self.decisions, k=1))
        return [(names[i], names[j]) for i, j in zip(i_idx, j_idx)]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "df_mode": self.df_mode,
            "rho_used": self.rho_used,
            "rho_source": self.rho_source,
            "asset_names": list(self.sr.asset_names),
            "sr_annualized": self.sr.sr.tolist(),
            "n": self.sr.n,
            "periods_per_year": self.sr.periods_per_year,
            "observed_range": self.observed_range,
            "hsd_inf": self.hsd_inf,
            "hsd_ndf": self.hsd_ndf,
            "bonferroni_cutoff": self.bc,
            "range_pvalue": self.range_pvalue,
            "decisions": self.decisions.astype(bool).tolist(),
            "rejected_pairs": [list(pair) for pair in self.rejected_pairs()],
            "global_stat": self.global_stat,
            "global_df": self.global_df,
            "global_pvalue": self.global_pvalue,
            "warnings": list(self.warnings),
        }


def analyze(
    est: SrEstimate,
    rho: float,
    rho_source: str,
    alpha: float = 0.05,
    df_mode: str = DF_N_MINUS_1,
    covariance_form: str = SIMPLE,
    warnings: tuple[str, ...] = (),
) -> PosthocReport:
    """Run the global equality test and the post-hoc range test on an estimate.

    ``est`` must hold per-period Sharpe ratios; the report is annualized.
    """
    if est.annualized:
        raise ValueError("analyze expects per-period Sharpe ratios")
    if est.k < 2:
        raise ValueError("need at least 2 assets")
    model = CorrModel.rank_one(rho, est.k)
    stat, df, global_p = global_equality_test(est, model, covariance_form)

    spec = CutoffSpec(alpha=alpha, k=est.k, n=est.n, rho=rho, df_mode=df_mode)
    spec_inf = CutoffSpec(alpha=alpha, k=est.k, n=est.n, rho=rho, df_mode=DF_INF)
    spec_ndf = CutoffSpec(alpha=alpha, k=est.k, n=est.n, rho=rho, df_mode=DF_N_MINUS_1)

    observed = float(est.sr.max() - est.sr.min())
    pvalue = range_pvalue(observed, spec)
    cutoff = hsd_cutoff(spec)
    decisions = (
        pairwise_decisions(est.sr, cutoff)
        if cutoff > 0
        else np.zeros((est.k, est.k), dtype=bool)
    )

    ann = math.sqrt(est.periods_per_year)
    return PosthocReport(
        sr=annualize(est),
        rho_used=rho,
        rho_source=rho_source,
        alpha=alpha,
        df_mode=df_mode,
        observed_range=observed * ann,
        hsd_inf=hsd_cutoff(spec_inf) * ann,
        hsd_ndf=hsd_cutoff(spec_ndf) * ann,
        bc=bonferroni_cutoff(alpha, est.k, est.n, rho) * ann,
        range_pvalue=pvalue,
        decisions=decisions,
        global_stat=stat,
        global_df=df,
        global_pvalue=global_p,
        warnings=tuple(warnings),
    )
