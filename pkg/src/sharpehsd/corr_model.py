"""Correlation structures: equicorrelated (rank-one), AR(1), and full matrices.

The rank-one family (1-rho)*I + rho*11' is the model the range test assumes;
its symmetric inverse square root has a closed form of the same shape.  The
median-of-upper-triangle estimator provides a feasible rho when only a
returns sample is available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RANK_ONE",
    "AR1",
    "FULL",
    "CorrModel",
    "rho_bounds",
    "clamp_rho",
    "make_rank_one",
    "inv_sqrt_rank_one",
    "make_ar1",
    "sample_correlation",
    "estimate_rho_median",
]

RANK_ONE = "rank_one"
AR1 = "ar1"
FULL = "full"

# Clamp margin when an estimated rho lands outside the PD-valid interval.
_CLAMP_EPS = 1e-6


def rho_bounds(p: int) -> tuple[float, float]:
    """Open interval of rho for which the rank-one matrix is positive definite."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    return -1.0 / (p - 1), 1.0


def _check_rank_one(rho: float, p: int) -> None:
    lo, hi = rho_bounds(p)
    if not (lo < rho < hi):
        raise ValueError(
            f"rho={rho} is outside the positive-definite range ({lo}, {hi}) for p={p}"
        )


def clamp_rho(rho: float, p: int) -> tuple[float, bool]:
    """Clamp rho to the interior of the PD interval; flags whether clamping occurred."""
    lo, hi = rho_bounds(p)
    if rho <= lo:
        return lo + _CLAMP_EPS, True
    if rho >= hi:
        return hi - _CLAMP_EPS, True
    return float(rho), False


def make_rank_one(rho: float, p: int) -> np.ndarray:
    """Equicorrelation matrix with unit diagonal and constant off-diagonal rho."""
    _check_rank_one(rho, p)
    return (1.0 - rho) * np.eye(p) + rho * np.ones((p, p))


def inv_sqrt_rank_one(rho: float, p: int) -> np.ndarray:
    """Symmetric inverse square root of the rank-one correlation matrix.

    Closed form: a*(I - J/p) + b*J/p with a = (1-rho)^(-1/2) and
    b = (1+(p-1)rho)^(-1/2), where J = 11'.  Satisfies M @ M @ R = I.
    """
    _check_rank_one(rho, p)
    a = (1.0 - rho) ** -0.5
    b = (1.0 + (p - 1) * rho) ** -0.5
    j_over_p = np.full((p, p), 1.0 / p)
    return a * (np.eye(p) - j_over_p) + b * j_over_p


def make_ar1(rho: float, p: int) -> np.ndarray:
    """AR(1) correlation matrix with entry (i, j) = rho^|i-j|."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if not abs(rho) < 1:
        raise ValueError(f"AR(1) requires |rho| < 1, got {rho}")
    idx = np.arange(p)
    return rho ** np.abs(np.subtract.outer(idx, idx))


def _as_values(returns) -> np.ndarray:
    values = np.asarray(getattr(returns, "values", returns), dtype=float)
    if values.ndim != 2:
        raise ValueError("returns must be a 2-D (observations x assets) array")
    return values


def _column_label(returns, j: int) -> str:
    names = getattr(returns, "asset_names", None)
    return names[j] if names is not None else f"column {j}"


def sample_correlation(returns) -> np.ndarray:
    """Pearson correlation matrix of a returns panel (n x p array or ReturnsPanel)."""
    values = _as_values(returns)
    n, p = values.shape
    if n < 2:
        raise ValueError("need at least 2 observations for a correlation")
    sd = values.std(axis=0, ddof=1)
    for j in np.flatnonzero(sd == 0.0):
        raise ValueError(f"zero-variance asset: {_column_label(returns, j)}")
    corr = np.corrcoef(values, rowvar=False)
    corr = np.atleast_2d(corr)
    np.fill_diagonal(corr, 1.0)
    return 0.5 * (corr + corr.T)


def estimate_rho_median(returns) -> float:
    """Median of the strictly-upper-triangle entries of the sample correlation.

    The feasible plug-in for the equicorrelation parameter; an even number of
    entries yields the midpoint of the two central order statistics.
    """
    values = _as_values(returns)
    n, p = values.shape
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n}")
    if p < 2:
        raise ValueError(f"need at least 2 assets, got {p}")
    corr = sample_correlation(returns)
    upper = corr[np.triu_indices(p, k=1)]
    return float(np.median(upper))


@dataclass(frozen=True)
class CorrModel:
    """A correlation structure: rank-one(rho, p), AR(1)(rho, p), or a full matrix."""

    kind: str
    rho: float | None = None
    p: int | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == RANK_ONE:
            _check_rank_one(self.rho, self.p)
        elif self.kind == AR1:
            if self.p < 2 or not abs(self.rho) < 1:
                raise ValueError(f"invalid AR(1) parameters rho={self.rho}, p={self.p}")
        elif self.kind == FULL:
            m = np.asarray(self.matrix, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("full correlation must be a square matrix")
            if not np.allclose(m, m.T, atol=1e-10):
                raise ValueError("full correlation must be symmetric")
            if not np.allclose(np.diag(m), 1.0, atol=1e-10):
                raise ValueError("full correlation must have a unit diagonal")
            try:
                np.linalg.cholesky(m)
            except np.linalg.LinAlgError:
                raise ValueError("full correlation must be positive definite") from None
            object.__setattr__(self, "matrix", m)
            object.__setattr__(self, "p", m.shape[0])
        else:
            raise ValueError(f"unknown correlation kind {self.kind!r}")

    @classmethod
    def rank_one(cls, rho: float, p: int) -> "CorrModel":
        return cls(kind=RANK_ONE, rho=float(rho), p=int(p))

    @classmethod
    def ar1(cls, rho: float, p: int) -> "CorrModel":
        return cls(kind=AR1, rho=float(rho), p=int(p))

    @classmethod
    def full(cls, matrix: np.ndarray) -> "CorrModel":
        return cls(kind=FULL, matrix=matrix)

    def to_matrix(self) -> np.ndarray:
        if self.kind == RANK_ONE:
            return make_rank_one(self.rho, self.p)
        if self.kind == AR1:
            return make_ar1(self.rho, self.p)
        return np.array(self.matrix, copy=True)
