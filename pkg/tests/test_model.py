"""Parameter validation and trigger-region classification."""

import math
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trigjump import (
    JumpLaw,
    ModelParams,
    Region,
    RegionJumpSpec,
    classify_region,
    validate,
)

from _factories import base_params


def test_boundary_belongs_to_normal_region():
    params = base_params()
    lo, hi = params.thresholds()
    assert classify_region(lo, params) == Region.NORMAL
    assert classify_region(hi, params) == Region.NORMAL


def test_zero_increment_is_normal():
    assert classify_region(0.0, base_params()) == Region.NORMAL


def test_down_region_example():
    # tau=0.01 puts the lower threshold at -0.2, so -0.21 is just below it
    params = base_params(tau=0.01, b_down=-2.0, b_up=2.0)
    assert classify_region(-0.21, params) == Region.DOWN
    assert classify_region(-0.20, params) == Region.NORMAL
    assert classify_region(0.21, params) == Region.UP


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_increment_rejected(bad):
    with pytest.raises(ValueError):
        classify_region(bad, base_params())


@given(
    dw=st.floats(-5.0, 5.0),
    c=st.floats(0.25, 4.0),
)
def test_classification_invariant_under_joint_rescaling(dw, c):
    """Thresholds are in sqrt(tau) units, so (dw, tau) -> (c dw, c^2 tau)
    lands in the same region."""
    params = base_params(tau=0.02)
    scaled = replace(params, tau=params.tau * c * c)
    assert classify_region(dw, params) == classify_region(c * dw, scaled)


@given(dw=st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_classification_is_total_and_consistent(dw):
    params = base_params()
    region = classify_region(dw, params)
    lo, hi = params.thresholds()
    if dw < lo:
        assert region == Region.DOWN
    elif dw > hi:
        assert region == Region.UP
    else:
        assert region == Region.NORMAL


def test_valid_params_produce_no_violations():
    assert validate(base_params()) == []


def test_validate_flags_bad_fields():
    assert any("sigma" in v for v in validate(base_params(sigma=0.0)))
    assert any("tau" in v for v in validate(base_params(tau=0.0)))
    assert any("b_down" in v for v in validate(base_params(b_down=0.5)))
    assert any("b_up" in v for v in validate(base_params(b_up=-0.5)))
    assert any("r" in v for v in validate(base_params(r=-0.01)))
    assert any("mu" in v for v in validate(base_params(mu=math.inf)))


def test_validate_flags_probabilities_out_of_range():
    bad = RegionJumpSpec(
        p_up=0.6, p_down=0.6, p_none=-0.2,
        law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
    )
    violations = validate(base_params(region_down=bad))
    assert any("p_none" in v for v in violations)


def test_validate_flags_probability_sum():
    bad = RegionJumpSpec(
        p_up=0.5, p_down=0.5, p_none=0.5,
        law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
    )
    violations = validate(base_params(region_up=bad))
    assert any("sum" in v for v in violations)


def test_validate_flags_degenerate_jump_law():
    bad = RegionJumpSpec(
        p_up=0.3, p_down=0.3, p_none=0.4,
        law_up=JumpLaw(0.0, 0.0), law_down=JumpLaw(0.0, 0.1),
    )
    violations = validate(base_params(region_down=bad))
    assert any("delta" in v for v in violations)


def test_ingest_renormalizes_small_probability_drift():
    spec = RegionJumpSpec.ingest(
        p_up=0.3, p_down=0.3, p_none=0.4 + 5e-10,
        law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
    )
    assert abs(spec.p_up + spec.p_down + spec.p_none - 1.0) < 1e-15
    # proportions preserved
    assert spec.p_up == pytest.approx(0.3, abs=1e-9)


def test_ingest_rejects_real_probability_errors():
    with pytest.raises(ValueError, match="sum"):
        RegionJumpSpec.ingest(
            p_up=0.3, p_down=0.3, p_none=0.4 + 5e-9,
            law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
        )
    with pytest.raises(ValueError):
        RegionJumpSpec.ingest(
            p_up=-0.1, p_down=0.6, p_none=0.5,
            law_up=JumpLaw(0.0, 0.1), law_down=JumpLaw(0.0, 0.1),
        )


def test_mapping_round_trip():
    params = base_params()
    assert ModelParams.from_mapping(params.to_dict()) == params


def test_region_spec_rejects_normal_region():
    with pytest.raises(ValueError):
        base_params().region_spec(Region.NORMAL)
