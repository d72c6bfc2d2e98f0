"""Scikit-learn style estimator wrapping the post-hoc Sharpe range test."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .corr_model import clamp_rho, estimate_rho_median
from .posthoc import DF_INF, DF_N_MINUS_1, RHO_ASSUMED, RHO_ESTIMATED, analyze
from .sr_core import SIMPLE, ReturnsPanel, sharpe_ratios

__all__ = ["SharpeRangePosthoc"]


class SharpeRangePosthoc(BaseEstimator):
    """Post-hoc range test on the Sharpe ratios of a panel of asset returns.

    Fit on an (n_observations, n_assets) array of periodic simple returns.
    The fitted estimator exposes the global chi-square equality test, the
    honest-significant-difference cutoffs, and the pairwise decision matrix.

    Parameters
    ----------
    alpha : float, default 0.05
        Nominal type-I rate of the range test.
    df_mode : {"n-1", "inf"}, default "n-1"
        Degrees-of-freedom convention of the cutoff; "n-1" is calibrated for
        small samples.
    rho : "estimate" or float, default "estimate"
        Common correlation of the equicorrelation model; "estimate" takes the
        median of the upper triangle of the sample correlation matrix.
    periods_per_year : float, default 252.0
        Annualization factor (252 daily, 12 monthly).
    risk_free : float, default 0.0
        Per-period risk-free rate subtracted before dividing by volatility.
    covariance_form : {"simple", "full"}, default "simple"
        Sharpe covariance used by the global equality test.

    Attributes
    ----------
    sr_ : ndarray of shape (n_assets,)
        Annualized Sharpe ratios.
    rho_ : float
        Correlation actually used by the cutoffs.
    hsd_ : float
        Selected annualized cutoff (per ``df_mode``).
    decisions_ : ndarray of shape (n_assets, n_assets), bool
        Pairwise rejections at the selected cutoff.
    report_ : PosthocReport
        Full structured result.
    """

    def __init__(
        self,
        alpha=0.05,
        df_mode=DF_N_MINUS_1,
        rho="estimate",
        periods_per_year=252.0,
        risk_free=0.0,
        covariance_form=SIMPLE,
    ):
        self.alpha = alpha
        self.df_mode = df_mode
        self.rho = rho
        self.periods_per_year = periods_per_year
        self.risk_free = risk_free
        self.covariance_form = covariance_form

    def fit(self, X, y=None):
        X = check_array(X, dtype=float, ensure_min_samples=3, ensure_min_features=2)
        panel = ReturnsPanel(values=X, periods_per_year=self.periods_per_year)
        est = sharpe_ratios(panel, risk_free_per_period=self.risk_free)

        warnings = []
        if self.rho == "estimate":
            raw = estimate_rho_median(panel.values)
            rho, clamped = clamp_rho(raw, panel.p)
            if clamped:
                warnings.append(
                    f"estimated rho {raw:.6f} outside the PD range; clamped to {rho:.6f}"
                )
            source = RHO_ESTIMATED
        else:
            rho, clamped = clamp_rho(float(self.rho), panel.p)
            if clamped:
                warnings.append(
                    f"assumed rho {float(self.rho):.6f} outside the PD range; "
                    f"clamped to {rho:.6f}"
                )
            source = RHO_ASSUMED

        report = analyze(
            est,
            rho=rho,
            rho_source=source,
            alpha=self.alpha,
            df_mode=self.df_mode,
            covariance_form=self.covariance_form,
            warnings=tuple(warnings),
        )
        self.n_features_in_ = panel.p
        self.report_ = report
        self.sr_ = report.sr.sr
        self.rho_ = report.rho_used
        self.hsd_ = report.selected_cutoff
        self.hsd_inf_ = report.hsd_inf
        self.hsd_ndf_ = report.hsd_ndf
        self.bonferroni_ = report.bc
        self.observed_range_ = report.observed_range
        self.range_pvalue_ = report.range_pvalue
        self.decisions_ = report.decisions
        self.global_stat_ = report.global_stat
        self.global_pvalue_ = report.global_pvalue
        return self

    def predict(self, X=None):
        """Pairwise decision matrix from the fitted panel; ``X`` is ignored."""
        check_is_fitted(self, "decisions_")
        return np.array(self.decisions_, copy=True)
