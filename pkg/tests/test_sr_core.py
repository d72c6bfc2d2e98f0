"""Tests for Sharpe ratio estimation, annualization, and covariance algebra."""

import math

import numpy as np
import pytest

from sharpehsd.corr_model import CorrModel
from sharpehsd.sr_core import (
    FULL_COV,
    SIMPLE,
    ReturnsPanel,
    SrEstimate,
    annualize,
    sharpe_ratios,
    sr_covariance,
    sr_from_summary,
    z_transform,
)


def panel_of(values, ppy=252.0, names=None):
    return ReturnsPanel(values=np.asarray(values, dtype=float), asset_names=names,
                        periods_per_year=ppy)


class TestSharpeRatios:
    def test_constant_column_rejected(self):
        panel = panel_of(np.column_stack([np.ones(5), np.arange(5.0)]), names=["flat", "ok"])
        with pytest.raises(ValueError, match="flat"):
            sharpe_ratios(panel)

    def test_zero_mean_column(self):
        x = np.array([[-0.01], [0.01], [-0.02], [0.02]])
        assert sharpe_ratios(panel_of(x)).sr[0] == pytest.approx(0.0, abs=1e-15)

    def test_hand_worked_column(self):
        col = np.array([0.01, -0.02, 0.03, 0.005, -0.005])
        mean = col.sum() / 5
        sd = math.sqrt(((col - mean) ** 2).sum() / 4)
        est = sharpe_ratios(panel_of(col[:, None]))
        assert est.sr[0] == pytest.approx(mean / sd, abs=1e-12)
        assert not est.annualized

    def test_risk_free_subtraction(self):
        col = np.array([0.01, -0.02, 0.03, 0.005, -0.005])
        rf = 0.001
        base = sharpe_ratios(panel_of(col[:, None])).sr[0]
        shifted = sharpe_ratios(panel_of(col[:, None]), risk_free_per_period=rf).sr[0]
        sd = col.std(ddof=1)
        assert shifted == pytest.approx(base - rf / sd, abs=1e-14)

    def test_scale_invariance(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal((50, 3)) * 0.01 + 0.001
        a = sharpe_ratios(panel_of(x)).sr
        b = sharpe_ratios(panel_of(x * np.array([3.0, 0.1, 42.0]))).sr
        assert np.allclose(a, b, atol=1e-12)


class TestAnnualize:
    def test_identity_at_one_period(self):
        est = SrEstimate(sr=[0.3], n=10, periods_per_year=1.0)
        assert annualize(est).sr[0] == pytest.approx(0.3)

    def test_daily_unit_snr(self):
        est = SrEstimate(sr=[1.0 / math.sqrt(252)], n=100, periods_per_year=252.0)
        assert annualize(est).sr[0] == pytest.approx(1.0, abs=1e-14)

    def test_monthly_factor(self):
        est = SrEstimate(sr=[0.2], n=100, periods_per_year=12.0)
        assert annualize(est).sr[0] == pytest.approx(0.2 * math.sqrt(12))

    def test_double_annualization_rejected(self):
        est = annualize(SrEstimate(sr=[0.2], n=100, periods_per_year=12.0))
        with pytest.raises(ValueError):
            annualize(est)


class TestSrFromSummary:
    def test_simple_ratio(self):
        est = sr_from_summary([10.0], [10.0], n=120)
        assert est.sr[0] == pytest.approx(1.0)
        assert est.annualized

    def test_fixed_rate_convention(self):
        est = sr_from_summary([10.0], [10.0], risk_free_annual=3.0, n=120)
        assert est.sr[0] == pytest.approx(0.7)

    def test_nonpositive_sd_named(self):
        with pytest.raises(ValueError, match="fund_b"):
            sr_from_summary([10.0, 5.0], [10.0, 0.0], n=120,
                            asset_names=["fund_a", "fund_b"])


class TestZTransform:
    def test_zero_at_null(self):
        est = SrEstimate(sr=[0.05, 0.05, 0.05], n=100)
        z = z_transform(est, CorrModel.rank_one(0.5, 3), 0.05)
        assert np.allclose(z, 0.0, atol=1e-14)

    def test_rho_zero_elementwise(self):
        est = SrEstimate(sr=[0.1, -0.05, 0.02], n=400)
        z = z_transform(est, CorrModel.rank_one(0.0, 3), 0.0)
        assert np.allclose(z, 20.0 * est.sr, atol=1e-12)

    def test_annualized_rejected(self):
        est = annualize(SrEstimate(sr=[0.1, 0.2], n=50))
        with pytest.raises(ValueError):
            z_transform(est, CorrModel.rank_one(0.0, 2), 0.0)

    def test_null_covariance_near_identity(self):
        rng = np.random.default_rng(31)
        n, p, rho, snr0 = 1000, 4, 0.6, 0.02
        model = CorrModel.rank_one(rho, p)
        reps = 10**4
        zs = np.empty((reps, p))
        for r in range(reps):
            x = (np.sqrt(rho) * rng.standard_normal((n, 1))
                 + np.sqrt(1 - rho) * rng.standard_normal((n, p)) + snr0)
            est = sharpe_ratios(ReturnsPanel(values=x))
            zs[r] = z_transform(est, model, snr0)
        cov = np.cov(zs, rowvar=False)
        assert np.max(np.abs(cov - np.eye(p))) < 0.05


class TestSrCovariance:
    def test_zero_snr_reduces_to_simple(self):
        model = CorrModel.rank_one(0.4, 3)
        full = sr_covariance(np.zeros(3), model, 100, FULL_COV)
        simple = sr_covariance(np.zeros(3), model, 100, SIMPLE)
        assert np.allclose(full, simple)
        assert np.allclose(simple, model.to_matrix() / 100)

    def test_scalar_standard_error(self):
        # One asset: the classical squared standard error (1 + snr^2/2)/n.
        zeta, n = 0.07, 250
        model = CorrModel.full(np.eye(1))
        cov = sr_covariance([zeta], model, n, FULL_COV)
        assert cov[0, 0] == pytest.approx((1.0 + zeta**2 / 2.0) / n, abs=1e-15)

    def test_small_snr_forms_close(self):
        zeta = math.sqrt(2 * 0.009)  # zeta^2/2 < 0.01
        model = CorrModel.rank_one(0.5, 4)
        full = sr_covariance(np.full(4, zeta), model, 500, FULL_COV)
        simple = sr_covariance(np.full(4, zeta), model, 500, SIMPLE)
        rel = np.abs(full - simple) / np.abs(simple)
        assert np.max(rel) < 0.01


class TestPanelValidation:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            ReturnsPanel(values=np.zeros(5))
        with pytest.raises(ValueError):
            ReturnsPanel(values=np.zeros((1, 3)))

    def test_name_defaulting(self):
        panel = panel_of(np.zeros((3, 2)) + [[0.1, 0.2], [0.0, 0.1], [0.3, -0.1]])
        assert panel.asset_names == ("asset_1", "asset_2")
        with pytest.raises(ValueError):
            panel_of(np.zeros((3, 2)), names=["only_one"])
