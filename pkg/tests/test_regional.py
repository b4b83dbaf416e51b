import numpy as np
import pytest
from hypothesis import given, strategies as st

from dronesnc.regional import (RegionalModel, infinite_profit_per_density, infinite_stationarity, is_unimodal,
                               large_world, optimal_regional_incentive, p_cov_core, p_cov_uil, p_cov_uil_quad,
                               regional_profit, regional_stationarity, tau_infinity, tau_star_sweep,
                               uil_gain_percent)
from dronesnc.uil import PersuasionFit, beta

FIG = RegionalModel(200.0, 2000.0, 1800.0)


@st.composite
def models(draw):
    W = draw(st.floats(100.0, 5000.0))
    R = draw(st.floats(1.0, W))
    d_u = draw(st.floats(0.0, 1.0)) * (W - R)
    return RegionalModel(R, W, d_u)


def test_core_probability():
    assert p_cov_core(RegionalModel(500.0, 500.0, 0.0)) == 1.0
    assert p_cov_core(FIG) == pytest.approx(0.01)


def test_model_validation():
    with pytest.raises(ValueError):
        RegionalModel(0.0, 10.0, 1.0)
    with pytest.raises(ValueError):
        RegionalModel(5.0, 10.0, 6.0)
    with pytest.raises(ValueError):
        RegionalModel(5.0, 10.0, 1.0, density=-1.0)


def test_uil_probability_examples():
    assert p_cov_uil(RegionalModel(200.0, 2000.0, 0.0), 0.3) == pytest.approx(0.0, abs=1e-15)
    assert p_cov_uil(FIG, 0.2) == pytest.approx(p_cov_uil_quad(FIG, 0.2), rel=1e-8)
    # tiny incentives: the band contributes little and shrinks as tau -> 0
    assert p_cov_uil(FIG, 1e-6) < p_cov_uil(FIG, 1e-3) < p_cov_uil(FIG, 0.2)
    assert p_cov_uil(FIG, 1e-6) < 0.1 * p_cov_core(FIG)


def test_closed_form_matches_printed_expression():
    for tau in (0.05, 0.3, 0.9):
        b = beta(tau)
        R, W, d = FIG.R, FIG.W, FIG.d_u
        printed = 2 * ((-b * (R + d) - 1) * np.exp(-b * d) + b * R + 1) / (W**2 * b**2)
        assert p_cov_uil(FIG, tau) == pytest.approx(printed, rel=1e-12)


def test_nonpositive_beta_rejected():
    fit = PersuasionFit(k1=-0.01, k2=-0.001)
    with pytest.raises(ValueError):
        p_cov_uil(RegionalModel(200.0, 2000.0, 100.0, fit=fit), 1.0)


def test_closed_form_vs_quadrature_sweep():
    rng = np.random.default_rng(0)
    for _ in range(100):
        W = rng.uniform(200, 5000)
        R = rng.uniform(1, W)
        m = RegionalModel(R, W, rng.uniform(0.01, 1) * (W - R))
        tau = rng.uniform(0.01, 1.0)
        assert p_cov_uil(m, tau) == pytest.approx(p_cov_uil_quad(m, tau), rel=1e-6)


@given(m=models(), tau=st.floats(0.001, 1.0))
def test_probabilities_bounded_and_additive(m, tau):
    pr, pd = p_cov_core(m), p_cov_uil(m, tau)
    assert pd >= 0 and pr + pd <= 1 + 1e-12
    assert regional_profit(m, tau) >= pr - 1e-15


def test_free_service_profit():
    assert regional_profit(FIG, 1.0) == pytest.approx(p_cov_core(FIG))


@given(R=st.floats(10, 500), frac=st.floats(0.01, 1.0), tau=st.floats(0.01, 1.0))
def test_gain_independent_of_world_size(R, frac, tau):
    d_u = frac * (2000.0 - R)
    a = uil_gain_percent(RegionalModel(R, 2000.0, d_u), tau)
    b = uil_gain_percent(RegionalModel(R, 4000.0, d_u), tau)
    assert a == pytest.approx(b, rel=1e-9)


def test_fig_parameters_peak_gain():
    opt = optimal_regional_incentive(FIG)
    assert opt.gain_percent == pytest.approx(50.0, abs=5.0)
    assert is_unimodal(FIG)
    for t in np.arange(0.1, 1.0, 0.1):
        assert opt.profit >= regional_profit(FIG, t)
    # the analytic derivative changes sign across the optimum
    assert regional_stationarity(FIG, opt.tau_star - 1e-3) > 0 > regional_stationarity(FIG, opt.tau_star + 1e-3)


def test_stationarity_matches_finite_difference():
    for t in (0.1, 0.3, 0.7):
        h = 1e-6
        fd = (regional_profit(FIG, t + h) - regional_profit(FIG, t - h)) / (2 * h)
        assert regional_stationarity(FIG, t) == pytest.approx(fd, rel=1e-5)


def test_floor_insensitivity():
    a = optimal_regional_incentive(FIG)
    b = optimal_regional_incentive(FIG, floor=5e-5)
    assert a.tau_star == pytest.approx(b.tau_star, abs=1e-5)


def test_empty_band_is_no_offer():
    opt = optimal_regional_incentive(RegionalModel(200.0, 2000.0, 0.0))
    assert opt.tau_star == 0.0 and opt.gain_percent == 0.0


def test_tau_star_nondecreasing_in_band():
    sweep = tau_star_sweep(200.0, 2000.0, np.linspace(50, 1800, 25))
    taus = [t for _, t in sweep]
    assert all(b >= a - 1e-6 for a, b in zip(taus, taus[1:]))


def test_tau_infinity_limit_and_residual():
    inf = tau_infinity(500.0)
    assert inf.residual <= 1e-8
    big = optimal_regional_incentive(large_world(RegionalModel(500.0, 1000.0, 500.0), 20_000.0))
    assert abs(big.tau_star - inf.tau) <= 0.01
    assert inf.profit_per_density >= np.pi * 500.0**2


@given(R=st.floats(10.0, 2000.0))
def test_infinite_profit_is_maximized(R):
    inf = tau_infinity(R)
    grid = np.linspace(1e-4, 1.0, 2000)
    assert infinite_profit_per_density(R, inf.tau) >= infinite_profit_per_density(R, grid).max() - 1e-9
    h = 1e-6
    fd = (infinite_profit_per_density(R, inf.tau + h) - infinite_profit_per_density(R, inf.tau - h)) / (2 * h)
    assert abs(fd) <= 1e-3 * infinite_profit_per_density(R, inf.tau) / R


def test_infinite_profit_is_limit_of_finite():
    R, tau = 300.0, 0.4
    W = 1e6
    m = RegionalModel(R, W, W - R)
    finite = regional_profit(m, tau) * W**2   # N * profit / (density * pi)
    assert finite == pytest.approx(infinite_profit_per_density(R, tau), rel=1e-9)
    # and the coded stationarity is half its derivative
    h = 1e-6
    fd = (infinite_profit_per_density(R, tau + h) - infinite_profit_per_density(R, tau - h)) / (2 * h)
    assert 2 * infinite_stationarity(R, tau) == pytest.approx(fd, rel=1e-5)
