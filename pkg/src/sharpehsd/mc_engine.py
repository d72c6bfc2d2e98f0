"""Seeded Monte Carlo engine for null calibration and power experiments.

Each replication draws its own counter-based RNG substream from
(seed, replication_index), so results are bitwise identical for a given spec
regardless of how replications are partitioned across workers.  Returns are
multivariate normal with unit per-period volatility; the signal-noise ratio
enters only through the mean.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import range_dist
from .corr_model import AR1, RANK_ONE, CorrModel, clamp_rho, estimate_rho_median
from .posthoc import DF_INF, DF_N_MINUS_1
from .sr_core import ReturnsPanel, sharpe_ratios

__all__ = [
    "NULL_RANGE",
    "ONE_GOOD",
    "HALF_GOOD",
    "TRUE_RHO",
    "ESTIMATED_RHO",
    "SimSpec",
    "SimResult",
    "null_spec",
    "one_good_spec",
    "half_good_spec",
    "sample_returns",
    "run_experiment",
    "run_null_experiment",
    "run_misspecified_ar1",
    "run_alternative",
    "aggregate",
    "results_to_csv",
    "CSV_FIELDS",
]

NULL_RANGE = "null_range"
ONE_GOOD = "one_good"
HALF_GOOD = "half_good"

# rho_policy is one of these strings, or a float for an assumed value.
TRUE_RHO = "true"
ESTIMATED_RHO = "estimated"


@dataclass(frozen=True)
class SimSpec:
    """Complete description of one Monte Carlo experiment cell."""

    n_days: int
    p: int
    corr: CorrModel
    snr_annual: tuple[float, ...]
    replications: int
    seed: int
    periods_per_year: float = 252.0
    alpha: float = 0.05
    df_mode: str = DF_N_MINUS_1
    rho_policy: str | float = TRUE_RHO
    design: str = NULL_RANGE

    def __post_init__(self):
        if self.n_days < 2:
            raise ValueError(f"n_days must be >= 2, got {self.n_days}")
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.df_mode not in (DF_INF, DF_N_MINUS_1):
            raise ValueError(f"unknown df_mode {self.df_mode!r}")
        if self.design not in (NULL_RANGE, ONE_GOOD, HALF_GOOD):
            raise ValueError(f"unknown design {self.design!r}")
        if self.design == HALF_GOOD and self.p % 2:
            raise ValueError("half-good design requires an even asset count")
        if isinstance(self.rho_policy, str) and self.rho_policy not in (
            TRUE_RHO,
            ESTIMATED_RHO,
        ):
            raise ValueError(f"unknown rho policy {self.rho_policy!r}")
        snr = np.atleast_1d(np.asarray(self.snr_annual, dtype=float))
        if snr.size == 1:
            snr = np.full(self.p, snr[0])
        if snr.size != self.p or not np.all(np.isfinite(snr)):
            raise ValueError("snr_annual must be finite, scalar or length p")
        object.__setattr__(self, "snr_annual", tuple(snr.tolist()))
        if self.corr.p != self.p:
            raise ValueError("correlation model dimension does not match p")

    @property
    def mean_per_period(self) -> np.ndarray:
        return np.asarray(self.snr_annual) / math.sqrt(self.periods_per_year)

    @property
    def psnr_annual(self) -> float:
        snr = np.asarray(self.snr_annual)
        return float(snr.max() - snr.min())


@dataclass(frozen=True)
class SimResult:
    """Aggregated rejection rate of one experiment cell."""

    spec: SimSpec
    rejection_rate: float
    rejection_se: float
    raw_ranges: np.ndarray | None = field(default=None, repr=False)
    raw_pvalues: np.ndarray | None = field(default=None, repr=False)


def null_spec(n_days, p, rho, replications, seed, snr_annual=1.0, **kwargs) -> SimSpec:
    """Null-design spec under rank-one correlation with a common SNR."""
    return SimSpec(
        n_days=n_days,
        p=p,
        corr=CorrModel.rank_one(rho, p),
        snr_annual=(float(snr_annual),) * p,
        replications=replications,
        seed=seed,
        design=NULL_RANGE,
        **kwargs,
    )


def one_good_spec(n_days, p, rho, psnr_annual, replications, seed, **kwargs) -> SimSpec:
    """One asset with SNR psnr_annual, the rest zero; one-sided range statistic."""
    snr = (float(psnr_annual),) + (0.0,) * (p - 1)
    return SimSpec(
        n_days=n_days,
        p=p,
        corr=CorrModel.rank_one(rho, p),
        snr_annual=snr,
        replications=replications,
        seed=seed,
        design=ONE_GOOD,
        **kwargs,
    )


def half_good_spec(n_days, p, rho, psnr_annual, replications, seed, **kwargs) -> SimSpec:
    """First half of the assets at SNR psnr_annual, the rest zero."""
    snr = (float(psnr_annual),) * (p // 2) + (0.0,) * (p - p // 2)
    return SimSpec(
        n_days=n_days,
        p=p,
        corr=CorrModel.rank_one(rho, p),
        snr_annual=snr,
        replications=replications,
        seed=seed,
        design=HALF_GOOD,
        **kwargs,
    )


def _rng_for(seed: int, replication_index: int) -> np.random.Generator:
    # Substream keyed on (seed, index): identical draws under any scheduling.
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(replication_index,))
    )


def sample_returns(spec: SimSpec, replication_index: int) -> ReturnsPanel:
    """One panel of simulated returns, deterministic in (seed, replication_index)."""
    rng = _rng_for(spec.seed, replication_index)
    n, p = spec.n_days, spec.p
    if spec.corr.kind == RANK_ONE and spec.corr.rho >= 0.0:
        rho = spec.corr.rho
        shared = rng.standard_normal((n, 1))
        own = rng.standard_normal((n, p))
        x = math.sqrt(rho) * shared + math.sqrt(1.0 - rho) * own
    else:
        chol = np.linalg.cholesky(spec.corr.to_matrix())
        x = rng.standard_normal((n, p)) @ chol.T
    return ReturnsPanel(
        values=x + spec.mean_per_period, periods_per_year=spec.periods_per_year
    )


def _design_statistic(sr: np.ndarray, design: str, p: int) -> float:
    if design == NULL_RANGE:
        return float(sr.max() - sr.min())
    if design == ONE_GOOD:
        return float(sr[0] - sr[1:].min())
    return float(sr[: p // 2].max() - sr[p // 2 :].min())


def _resolve_rho(spec: SimSpec, panel: ReturnsPanel) -> float:
    if spec.rho_policy == TRUE_RHO:
        if spec.corr.kind != RANK_ONE:
            raise ValueError("TRUE_RHO policy requires a rank-one correlation model")
        return spec.corr.rho
    if spec.rho_policy == ESTIMATED_RHO:
        rho, _ = clamp_rho(estimate_rho_median(panel.values), spec.p)
        return rho
    rho, _ = clamp_rho(float(spec.rho_policy), spec.p)
    return rho


def _run_chunk(spec: SimSpec, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    stats = np.empty(stop - start)
    rhos = np.empty(stop - start)
    for i, rep in enumerate(range(start, stop)):
        panel = sample_returns(spec, rep)
        sr = sharpe_ratios(panel).sr
        stats[i] = _design_statistic(sr, spec.design, spec.p)
        rhos[i] = _resolve_rho(spec, panel)
    return stats, rhos


def aggregate(rejections) -> tuple[float, float]:
    """Rejection rate and its binomial standard error from per-replication flags."""
    flags = np.asarray(list(rejections), dtype=bool)
    if flags.size == 0:
        raise ValueError("cannot aggregate an empty replication stream")
    rate = float(flags.mean())
    se = math.sqrt(rate * (1.0 - rate) / flags.size)
    return rate, se


def run_experiment(spec: SimSpec, keep_raw: bool = False, workers: int = 1) -> SimResult:
    """Run all replications of one cell and aggregate the rejection rate.

    ``workers`` > 1 fans replications out over processes; results are
    identical to the single-worker run because substreams are per-replication
    and chunks are reassembled in index order.
    """
    reps = spec.replications
    if workers > 1 and reps > 1:
        bounds = np.linspace(0, reps, min(workers, reps) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(_run_chunk, [spec] * (len(bounds) - 1), bounds[:-1], bounds[1:])
            )
        stats = np.concatenate([s for s, _ in parts])
        rhos = np.concatenate([r for _, r in parts])
    else:
        stats, rhos = _run_chunk(spec, 0, reps)

    df = float(spec.n_days - 1) if spec.df_mode == DF_N_MINUS_1 else math.inf
    denom = spec.n_days - 1 if spec.df_mode == DF_N_MINUS_1 else spec.n_days
    qstar = range_dist.qtukey(1.0 - spec.alpha, spec.p, df)
    scales = np.sqrt((1.0 - rhos) / denom)
    rejections = stats >= qstar * scales
    rate, se = aggregate(rejections)

    raw_ranges = raw_pvalues = None
    if keep_raw:
        raw_ranges = stats
        raw_pvalues = 1.0 - range_dist.ptukey(stats / scales, spec.p, df)
    return SimResult(
        spec=spec,
        rejection_rate=rate,
        rejection_se=se,
        raw_ranges=raw_ranges,
        raw_pvalues=raw_pvalues,
    )


def run_null_experiment(spec: SimSpec, keep_raw: bool = False, workers: int = 1) -> SimResult:
    """Null-design runner; requires a constant SNR vector so the null holds."""
    if spec.design != NULL_RANGE:
        raise ValueError("run_null_experiment requires the null-range design")
    snr = np.asarray(spec.snr_annual)
    if not np.allclose(snr, snr[0]):
        raise ValueError("null experiment requires a constant SNR vector")
    return run_experiment(spec, keep_raw=keep_raw, workers=workers)


def run_misspecified_ar1(spec: SimSpec, keep_raw: bool = False, workers: int = 1) -> SimResult:
    """Null runner with AR(1) truth and an estimated or assumed rho policy."""
    if spec.corr.kind != AR1:
        raise ValueError("run_misspecified_ar1 requires an AR(1) correlation model")
    if spec.rho_policy == TRUE_RHO:
        raise ValueError("rho policy must be estimated or an assumed value")
    return run_experiment(spec, keep_raw=keep_raw, workers=workers)


def run_alternative(
    base: SimSpec, psnr_grid, rho_grid, workers: int = 1
) -> list[SimResult]:
    """Sweep the one-good or half-good design over a (psnr, rho) grid."""
    if base.design not in (ONE_GOOD, HALF_GOOD):
        raise ValueError("run_alternative requires a one-good or half-good design")
    make = one_good_spec if base.design == ONE_GOOD else half_good_spec
    results = []
    for psnr in psnr_grid:
        for rho in rho_grid:
            spec = make(
                base.n_days,
                base.p,
                float(rho),
                float(psnr),
                base.replications,
                base.seed,
                periods_per_year=base.periods_per_year,
                alpha=base.alpha,
                df_mode=base.df_mode,
                rho_policy=base.rho_policy,
            )
            results.append(run_experiment(spec, workers=workers))
    return results


CSV_FIELDS = [
    "design",
    "n",
    "p",
    "rho",
    "psnr",
    "df_mode",
    "rho_policy",
    "replications",
    "rate",
    "se",
    "seed",
]


def results_to_csv(results, fileobj) -> None:
    """Write one row per experiment cell in the fixed simulation CSV schema."""
    writer = csv.DictWriter(fileobj, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for res in results:
        spec = res.spec
        writer.writerow(
            {
                "design": spec.design,
                "n": spec.n_days,
                "p": spec.p,
                "rho": "" if spec.corr.rho is None else repr(spec.corr.rho),
                "psnr": repr(spec.psnr_annual),
                "df_mode": spec.df_mode,
                "rho_policy": spec.rho_policy,
                "replications": spec.replications,
                "rate": repr(res.rejection_rate),
                "se": repr(res.rejection_se),
                "seed": spec.seed,
            }
        )
