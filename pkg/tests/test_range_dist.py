"""Tests for the studentized range CDF/quantile and normal helpers.

Expected values come from independent oracles: math.erf for the normal
helpers, the analytic k=2 reduction 2*Phi(q/sqrt(2)) - 1 for the range CDF,
and direct Monte Carlo simulation of studentized ranges for everything else.
"""

import math

import numpy as np
import pytest

from sharpehsd.range_dist import (
    INFINITE_DF,
    RangeDistParams,
    ptukey,
    qtukey,
    range_cdf_inf,
    std_normal_cdf,
    std_normal_quantile,
)


def erf_cdf(x):
    # Independent oracle for the normal CDF, via the stdlib erf.
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def simulated_ranges(k, df, size, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((size, k))
    r = z.max(axis=1) - z.min(axis=1)
    if math.isfinite(df):
        r = r / np.sqrt(rng.chisquare(df, size) / df)
    return r


def ks_distance(sample, cdf_values):
    order = np.argsort(sample)
    f = np.asarray(cdf_values)[order]
    n = sample.size
    i = np.arange(1, n + 1)
    return max(np.max(i / n - f), np.max(f - (i - 1) / n))


def cdf_at(sample, k, df):
    # Evaluate ptukey at many points via a dense monotone grid.
    grid = np.linspace(0.0, sample.max() * 1.0001, 2001)
    return np.interp(sample, grid, ptukey(grid, k, df))


class TestNormalHelpers:
    def test_cdf_symmetry(self):
        assert std_normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_cdf_tail_limit(self):
        assert std_normal_cdf(10.0) == pytest.approx(1.0, abs=1e-12)

    def test_cdf_against_erf(self):
        for x in [-3.5, -1.0, 0.3, 1.959964, 4.2]:
            assert std_normal_cdf(x) == pytest.approx(erf_cdf(x), abs=1e-12)

    def test_cdf_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            std_normal_cdf(float("nan"))
        with pytest.raises(ValueError):
            std_normal_cdf(float("inf"))

    def test_quantile_median(self):
        assert std_normal_quantile(0.5) == pytest.approx(0.0, abs=1e-15)

    def test_quantile_0975(self):
        assert std_normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-5)

    def test_quantile_roundtrip(self):
        for x in np.linspace(-6.0, 6.0, 25):
            assert std_normal_quantile(std_normal_cdf(x)) == pytest.approx(x, abs=1e-8)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1])
    def test_quantile_domain(self, p):
        with pytest.raises(ValueError):
            std_normal_quantile(p)


class TestParams:
    def test_k_too_small(self):
        with pytest.raises(ValueError):
            RangeDistParams(k=1)

    def test_bad_df(self):
        with pytest.raises(ValueError):
            RangeDistParams(k=3, df=0.0)
        with pytest.raises(ValueError):
            RangeDistParams(k=3, df=-2.0)


class TestRangeCdfInf:
    @pytest.mark.parametrize("k", [2, 5, 16, 34])
    def test_zero_width(self, k):
        assert range_cdf_inf(0.0, k) == 0.0

    def test_k2_analytic(self):
        # Range of two normals is |N(0, 2)|.
        q = np.linspace(0.0, 8.0, 81)
        expected = 2.0 * np.array([erf_cdf(v / math.sqrt(2.0)) for v in q]) - 1.0
        assert np.max(np.abs(range_cdf_inf(q, 2) - expected)) < 1e-6

    def test_k16_simulated_quantile(self):
        r = simulated_ranges(16, math.inf, 10**6, seed=1234)
        q95 = np.quantile(r, 0.95)
        assert range_cdf_inf(q95, 16) == pytest.approx(0.95, abs=0.003)

    def test_monotone_in_q(self):
        q = np.linspace(0.0, 10.0, 400)
        vals = range_cdf_inf(q, 8)
        assert np.all(np.diff(vals) >= 0)
        assert np.all((vals >= 0) & (vals <= 1))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            range_cdf_inf(-0.1, 4)
        with pytest.raises(ValueError):
            range_cdf_inf(1.0, 1)


class TestPtukey:
    def test_zero(self):
        assert ptukey(0.0, 5, 10.0) == 0.0

    @pytest.mark.parametrize("k", [2, 8, 16])
    @pytest.mark.parametrize("q", [1.0, 2.0, 3.0, 4.0])
    def test_large_df_matches_inf(self, k, q):
        assert ptukey(q, k, 1e7) == pytest.approx(range_cdf_inf(q, k), abs=1e-4)

    def test_k2_df5_monte_carlo(self):
        r = simulated_ranges(2, 5.0, 10**6, seed=777)
        for q in [1.0, 2.5, 4.0, 6.0]:
            assert ptukey(q, 2, 5.0) == pytest.approx(np.mean(r <= q), abs=0.003)

    def test_monotone_in_q_and_df_upper_tail(self):
        q = np.linspace(0.1, 9.0, 120)
        vals = ptukey(q, 16, 7.0)
        assert np.all(np.diff(vals) > 0)
        # In the left tail the heavy chi scale at small df inflates the CDF,
        # so df-monotonicity only holds from the bulk upward.
        for qv in [4.0, 5.0, 7.0]:
            low, mid, high = (ptukey(qv, 16, df) for df in (4.0, 30.0, INFINITE_DF))
            assert low < mid < high


class TestQtukey:
    def test_k2_inf_analytic(self):
        expected = math.sqrt(2.0) * std_normal_quantile(0.975)
        assert qtukey(0.95, 2) == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("p", [0.01, 0.5, 0.95, 0.999])
    @pytest.mark.parametrize("k", [2, 5, 16, 34])
    @pytest.mark.parametrize("df", [5.0, 30.0, 1103.0, INFINITE_DF])
    def test_roundtrip(self, p, k, df):
        assert ptukey(qtukey(p, k, df), k, df) == pytest.approx(p, abs=1e-7)

    def test_monthly_hsd_value(self):
        # With rho=0.8 and 1104 monthly observations, the annualized cutoff
        # at the 0.95 level for 5 assets is about 0.18 per sqrt-year.
        q = qtukey(0.95, 5, 1103.0)
        assert q * math.sqrt(0.2 / 1103) * math.sqrt(12) == pytest.approx(0.18, abs=0.01)

    def test_quantile_monotonicity(self):
        ps = [0.2, 0.5, 0.9]
        qs = [qtukey(p, 8, 20.0) for p in ps]
        assert qs[0] < qs[1] < qs[2]
        ks = [2, 5, 16]
        qk = [qtukey(0.9, k, 20.0) for k in ks]
        assert qk[0] < qk[1] < qk[2]
        dfs = [5.0, 30.0, INFINITE_DF]
        qd = [qtukey(0.9, 8, df) for df in dfs]
        assert qd[0] > qd[1] > qd[2]

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 2.0])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            qtukey(p, 4)


@pytest.mark.parametrize("k", [2, 8, 16, 32])
@pytest.mark.parametrize("df", [5.0, 30.0, INFINITE_DF])
def test_simulation_oracle_agreement(k, df):
    r = simulated_ranges(k, df, 10**5, seed=k * 1000 + int(df if math.isfinite(df) else 0))
    assert ks_distance(r, cdf_at(r, k, df)) < 0.01
