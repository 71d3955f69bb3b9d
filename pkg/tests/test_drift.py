"""No-arbitrage drift: closed form, decomposition, calibration."""

import math
from dataclasses import replace

import numpy as np
import pytest

from trigjump import (
    JumpLaw,
    ModelParams,
    NoRootInBracket,
    RegionJumpSpec,
    RiskPremia,
    calibrate_gamma,
    conditional_mgf,
    expect_mq,
    gaussian_expectation,
    no_arbitrage_drift,
    risk_neutralize,
)

from _factories import base_params, base_premia, no_jump_params, random_model


def test_conditional_mgf_is_one_in_normal_band(params, premia):
    rn = risk_neutralize(params, premia)
    assert conditional_mgf(0.0, rn, params) == 1.0


def test_conditional_mgf_is_one_without_jump_mass(premia):
    params = no_jump_params()
    rn = risk_neutralize(params, premia)
    lo, hi = params.thresholds()
    for x in (lo - 0.1, 0.0, hi + 0.1):
        assert conditional_mgf(x, rn, params) == pytest.approx(1.0, abs=1e-15)


def test_conditional_mgf_plateau_value():
    """Pure up-jump region with N(0, 0.1^2) jumps: plateau e^{0.005}."""
    spec = RegionJumpSpec(
        p_up=1.0, p_down=0.0, p_none=0.0,
        law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
    )
    params = base_params(region_down=spec)
    premia = base_premia(gamma_d=0.0, eta_down_up=0.0, eta_down_down=0.0)
    rn = risk_neutralize(params, premia)
    lo, _ = params.thresholds()
    assert conditional_mgf(lo - 0.01, rn, params) == pytest.approx(
        1.005012520859401, abs=1e-14
    )


def test_gaussian_expectation_is_one_when_levels_are_one(premia):
    params = no_jump_params()
    assert gaussian_expectation(params, premia) == pytest.approx(1.0, abs=1e-15)


def test_gaussian_expectation_is_one_when_regions_vanish(premia):
    # thresholds so wide the trigger regions carry no Gaussian mass
    params = base_params(b_down=-30.0, b_up=30.0)
    assert gaussian_expectation(params, premia) == pytest.approx(1.0, abs=1e-13)


def test_gaussian_expectation_matches_quadrature_oracle():
    rng = np.random.default_rng(99)
    for _ in range(10):
        params, premia = random_model(rng)
        rn = risk_neutralize(params, premia)
        closed = gaussian_expectation(params, premia, rn)
        quad = expect_mq(params, premia, rn)
        assert closed == pytest.approx(quad.value, abs=1e-8)


def test_no_jump_zero_premium_drift_is_risk_free(premia):
    params = no_jump_params()
    report = no_arbitrage_drift(params, replace(premia, gamma_d=0.0))
    assert report.mu == pytest.approx(params.r, abs=1e-15)
    assert report.jump_adjustment == pytest.approx(0.0, abs=1e-15)


def test_no_jump_drift_adds_diffusion_premium():
    params = no_jump_params()
    premia = base_premia(gamma_d=1.3)
    report = no_arbitrage_drift(params, premia)
    assert report.mu == pytest.approx(params.r + 1.3 * params.sigma ** 2, abs=1e-14)


def test_drift_decomposition_sums_exactly(params, premia):
    report = no_arbitrage_drift(params, premia)
    total = report.risk_free + report.diffusion_premium + report.jump_adjustment
    assert report.mu == total  # same floating-point sum, not just close


def test_drift_ignores_params_mu(params, premia):
    shifted = replace(params, mu=params.mu + 5.0)
    assert no_arbitrage_drift(params, premia).mu == no_arbitrage_drift(shifted, premia).mu


def test_jump_adjustment_sign_tracks_levels(premia):
    # expected jump factor above one in both regions -> adjustment negative
    rich = RegionJumpSpec(
        p_up=1.0, p_down=0.0, p_none=0.0,
        law_up=JumpLaw(0.2, 0.05), law_down=JumpLaw(0.0, 0.05),
    )
    poor = RegionJumpSpec(
        p_up=0.0, p_down=1.0, p_none=0.0,
        law_up=JumpLaw(0.0, 0.05), law_down=JumpLaw(-0.2, 0.05),
    )
    flat = base_premia(gamma_d=0.0, eta_down_up=0.0, eta_down_down=0.0,
                       eta_up_up=0.0, eta_up_down=0.0)
    up_rich = base_params(region_down=rich, region_up=rich)
    assert no_arbitrage_drift(up_rich, flat).jump_adjustment < 0.0
    down_poor = base_params(region_down=poor, region_up=poor)
    assert no_arbitrage_drift(down_poor, flat).jump_adjustment > 0.0


def test_degenerate_thresholds_recover_diffusion_drift(params, premia):
    wide = replace(params, b_down=-25.0, b_up=25.0)
    report = no_arbitrage_drift(wide, premia)
    assert report.mu == pytest.approx(
        params.r + premia.gamma_d * params.sigma ** 2, abs=1e-12
    )


def test_drift_rejects_invalid_params(premia):
    with pytest.raises(ValueError, match="sigma"):
        no_arbitrage_drift(base_params(sigma=-1.0), premia)


def test_calibrate_no_jump_closed_forms(premia):
    params = no_jump_params()
    res_zero = calibrate_gamma(params, premia, params.r)
    assert res_zero.gamma_d == pytest.approx(0.0, abs=1e-11)
    res_one = calibrate_gamma(params, premia, params.r + params.sigma ** 2)
    assert res_one.gamma_d == pytest.approx(1.0, abs=1e-10)
    assert res_zero.monotone and res_zero.unique


def test_calibrate_round_trip(params, premia):
    target = no_arbitrage_drift(params, premia).mu
    res = calibrate_gamma(params, premia, target)
    assert res.gamma_d == pytest.approx(premia.gamma_d, abs=1e-9)


def test_calibrate_raises_when_target_unreachable(params, premia):
    with pytest.raises(NoRootInBracket):
        calibrate_gamma(params, premia, 1e6)


def test_calibrate_reports_multiple_roots():
    """A steep two-sided jump profile folds mu(gamma); all three crossings
    must be surfaced and the one nearest zero returned."""
    law_up = JumpLaw(0.4, 0.05)
    law_down = JumpLaw(-0.4, 0.05)
    params = ModelParams(
        mu=0.0, sigma=0.45, r=0.02, tau=0.2, b_down=-0.9, b_up=0.9,
        region_down=RegionJumpSpec(1.0, 0.0, 0.0, law_up, law_down),
        region_up=RegionJumpSpec(0.0, 1.0, 0.0, law_up, law_down),
    )
    premia = RiskPremia(0.0, 0.0, 0.0, 0.0, 0.0)
    res = calibrate_gamma(params, premia, 0.08)
    assert not res.monotone
    assert not res.unique
    assert len(res.roots) == 3
    assert res.gamma_d == min(res.roots, key=abs)
    for root in res.roots:
        forward = no_arbitrage_drift(params, replace(premia, gamma_d=root)).mu
        assert forward == pytest.approx(0.08, abs=1e-12)


def test_calibrate_rejects_bad_bracket(params, premia):
    with pytest.raises(ValueError):
        calibrate_gamma(params, premia, params.r, bracket=(2.0, -2.0))
