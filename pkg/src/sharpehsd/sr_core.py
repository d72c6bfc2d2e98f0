"""Sharpe ratio estimation, annualization, and the asymptotic covariance algebra.

Sharpe ratios are kept in per-period units internally; annualization
multiplies by sqrt(periods per year) and is applied once, for display.
Population signal-noise ratios (SNRs) are plain vectors in per-period units.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .corr_model import RANK_ONE, CorrModel, inv_sqrt_rank_one

__all__ = [
    "SIMPLE",
    "FULL_COV",
    "ReturnsPanel",
    "SrEstimate",
    "sharpe_ratios",
    "annualize",
    "sr_from_summary",
    "z_transform",
    "sr_covariance",
]

SIMPLE = "simple"
FULL_COV = "full"


@dataclass(frozen=True)
class ReturnsPanel:
    """An n x p matrix of periodic simple returns with labels and periodicity."""

    values: np.ndarray
    asset_names: tuple[str, ...] | None = None
    periods_per_year: float = 252.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D (observations x assets) array")
        n, p = values.shape
        if n < 2 or p < 1:
            raise ValueError(f"need n >= 2 observations and p >= 1 assets, got {n} x {p}")
        if self.periods_per_year <= 0:
            raise ValueError("periods_per_year must be positive")
        names = self.asset_names
        if names is None:
            names = tuple(f"asset_{j + 1}" for j in range(p))
        else:
            names = tuple(str(s) for s in names)
            if len(names) != p:
                raise ValueError(f"{len(names)} names for {p} assets")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "asset_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SrEstimate:
    """Per-asset Sharpe ratios with their sample size and annualization state."""

    sr: np.ndarray
    n: int
    periods_per_year: float = 252.0
    annualized: bool = False
    asset_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        sr = np.atleast_1d(np.asarray(self.sr, dtype=float))
        if not np.all(np.isfinite(sr)):
            raise ValueError("Sharpe ratios must be finite")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        names = self.asset_names or tuple(f"asset_{j + 1}" for j in range(sr.size))
        if len(names) != sr.size:
            raise ValueError(f"{len(names)} names for {sr.size} Sharpe ratios")
        object.__setattr__(self, "sr", sr)
        object.__setattr__(self, "asset_names", tuple(names))

    @property
    def k(self) -> int:
        return self.sr.size


def sharpe_ratios(panel: ReturnsPanel, risk_free_per_period: float = 0.0) -> SrEstimate:
    """Per-period Sharpe ratios: (mean - rf) / sd with the n-1 sd denominator."""
    values = panel.values
    sd = values.std(axis=0, ddof=1)
    for j in np.flatnonzero(sd == 0.0):
        raise ValueError(f"zero-variance asset: {panel.asset_names[j]}")
    sr = (values.mean(axis=0) - risk_free_per_period) / sd
    return SrEstimate(
        sr=sr,
        n=panel.n,
        periods_per_year=panel.periods_per_year,
        annualized=False,
        asset_names=panel.asset_names,
    )


def annualize(est: SrEstimate) -> SrEstimate:
    """Scale per-period Sharpe ratios by sqrt(periods per year)."""
    if est.annualized:
        raise ValueError("estimate is already annualized")
    factor = np.sqrt(est.periods_per_year)
    return replace(est, sr=est.sr * factor, annualized=True)


def sr_from_summary(
    annual_return_pct,
    annual_sd_pct,
    risk_free_annual: float = 0.0,
    *,
    n: int,
    periods_per_year: float = 12.0,
    asset_names=None,
) -> SrEstimate:
    """Annualized Sharpe ratios from tabulated annual return/sd percentages.

    ``n`` is the number of underlying return observations at the stated
    periodicity; it must be supplied by the caller because summary tables do
    not carry it.
    """
    ret = np.atleast_1d(np.asarray(annual_return_pct, dtype=float))
    sd = np.atleast_1d(np.asarray(annual_sd_pct, dtype=float))
    if ret.shape != sd.shape:
        raise ValueError("return and sd vectors must have the same length")
    bad = np.flatnonzero(sd <= 0.0)
    if bad.size:
        label = asset_names[bad[0]] if asset_names is not None else f"row {bad[0]}"
        raise ValueError(f"nonpositive standard deviation for {label}")
    sr = (ret - risk_free_annual) / sd
    return SrEstimate(
        sr=sr,
        n=int(n),
        periods_per_year=periods_per_year,
        annualized=True,
        asset_names=tuple(asset_names) if asset_names is not None else (),
    )


def z_transform(est: SrEstimate, model: CorrModel, snr0) -> np.ndarray:
    """Standardize Sharpe ratios under the null: sqrt(n) * R^(-1/2) * (sr - snr0).

    ``snr0`` is the common null SNR, a scalar or constant vector in per-period
    units.  Under the null the result is approximately standard normal.
    """
    if est.annualized:
        raise ValueError("z_transform expects per-period Sharpe ratios")
    if model.kind != RANK_ONE:
        raise ValueError("z_transform requires a rank-one correlation model")
    snr0 = np.broadcast_to(np.asarray(snr0, dtype=float), est.sr.shape)
    if snr0.size > 1 and not np.allclose(snr0, snr0.flat[0]):
        raise ValueError("null SNR vector must be constant")
    m = inv_sqrt_rank_one(model.rho, est.k)
    return np.sqrt(est.n) * (m @ (est.sr - snr0))


def sr_covariance(snr, model: CorrModel, n: int, form: str = SIMPLE) -> np.ndarray:
    """Asymptotic covariance of the Sharpe ratio vector.

    SIMPLE is R/n; FULL adds the second-order SNR term
    (R + diag(snr) (R o R) diag(snr) / 2) / n, with o the elementwise product.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    r = model.to_matrix()
    if form == SIMPLE:
        return r / n
    if form == FULL_COV:
        z = np.broadcast_to(np.asarray(snr, dtype=float), (r.shape[0],))
        dz = np.diag(z)
        return (r + 0.5 * dz @ (r * r) @ dz) / n
    raise ValueError(f"unknown covariance form {form!r}")
