"""Builders for parameter sets used across the test modules."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from trigjump import JumpLaw, ModelParams, RegionJumpSpec, RiskPremia


def base_params(**overrides) -> ModelParams:
    params = ModelParams(
        mu=0.08,
        sigma=0.2,
        r=0.03,
        tau=1.0 / 52.0,
        b_down=-1.8,
        b_up=2.0,
        region_down=RegionJumpSpec(
            p_up=0.25, p_down=0.55, p_none=0.20,
            law_up=JumpLaw(-0.02, 0.15), law_down=JumpLaw(-0.05, 0.2),
        ),
        region_up=RegionJumpSpec(
            p_up=0.5, p_down=0.3, p_none=0.2,
            law_up=JumpLaw(0.05, 0.1), law_down=JumpLaw(-0.03, 0.12),
        ),
    )
    return replace(params, **overrides) if overrides else params


def base_premia(**overrides) -> RiskPremia:
    premia = RiskPremia(
        gamma_d=0.7,
        eta_down_up=-0.4, eta_down_down=0.6,
        eta_up_up=-0.8, eta_up_down=0.3,
    )
    return replace(premia, **overrides) if overrides else premia


def no_jump_params(**overrides) -> ModelParams:
    """Degenerate model: both regions carry only the no-jump atom."""
    sleeper = RegionJumpSpec(
        p_up=0.0, p_down=0.0, p_none=1.0,
        law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
    )
    return base_params(region_down=sleeper, region_up=sleeper, **overrides)


def _random_region(rng: np.random.Generator) -> RegionJumpSpec:
    p_up, p_down, p_none = rng.dirichlet((1.0, 1.0, 1.0))
    return RegionJumpSpec(
        p_up=float(p_up), p_down=float(p_down), p_none=float(p_none),
        law_up=JumpLaw(float(rng.uniform(-0.15, 0.15)), float(rng.uniform(0.02, 0.3))),
        law_down=JumpLaw(float(rng.uniform(-0.15, 0.15)), float(rng.uniform(0.02, 0.3))),
    )


def random_model(rng: np.random.Generator) -> tuple[ModelParams, RiskPremia]:
    """A valid (params, premia) pair drawn from wide but sane ranges."""
    params = ModelParams(
        mu=float(rng.uniform(-0.1, 0.2)),
        sigma=float(rng.uniform(0.05, 0.6)),
        r=float(rng.uniform(0.0, 0.08)),
        tau=float(rng.uniform(1.0 / 252.0, 0.25)),
        b_down=-float(rng.uniform(0.5, 3.0)),
        b_up=float(rng.uniform(0.5, 3.0)),
        region_down=_random_region(rng),
        region_up=_random_region(rng),
    )
    premia = RiskPremia(
        gamma_d=float(rng.uniform(-2.0, 2.0)),
        eta_down_up=float(rng.uniform(-2.0, 2.0)),
        eta_down_down=float(rng.uniform(-2.0, 2.0)),
        eta_up_up=float(rng.uniform(-2.0, 2.0)),
        eta_up_down=float(rng.uniform(-2.0, 2.0)),
    )
    return params, premia
