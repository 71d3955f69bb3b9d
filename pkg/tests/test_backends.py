"""Backend dispatch: numba and numpy kernels must agree bit-for-bit."""

import numpy as np
import pytest

from trigjump import SeedSpec, simulate_p
from trigjump._kernels import (
    HAS_NUMBA,
    _log_step_kernels_np,
    _step_outcomes_np,
    active_backend,
)

from _factories import base_params

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")


@pytest.fixture
def raw_draws():
    rng = np.random.default_rng(1000)
    shape = (500, 7)
    return (
        rng.standard_normal(shape),
        rng.random(shape),
        rng.standard_normal(shape),
    )


def kernel_args(params):
    return dict(
        sqrt_tau=params.tau ** 0.5,
        shift=-0.002,
        thr_down=params.thresholds()[0],
        thr_up=params.thresholds()[1],
        p_up=np.array([params.region_down.p_up, params.region_up.p_up]),
        p_down=np.array([params.region_down.p_down, params.region_up.p_down]),
        nu_up=np.array([-0.02, 0.05]),
        nu_down=np.array([-0.05, -0.03]),
        del_up=np.array([0.15, 0.1]),
        del_down=np.array([0.2, 0.12]),
        base_drift=1.3e-3,
        sigma=params.sigma,
    )


@needs_numba
def test_step_outcome_kernels_bit_identical(raw_draws):
    from trigjump._kernels import _step_outcomes_nb

    params = base_params()
    args = kernel_args(params)
    z_dw, u_kind, z_size = raw_draws
    ordered = (
        z_dw, u_kind, z_size,
        args["sqrt_tau"], args["shift"], args["thr_down"], args["thr_up"],
        args["p_up"], args["p_down"], args["nu_up"], args["nu_down"],
        args["del_up"], args["del_down"], args["base_drift"], args["sigma"],
    )
    for a, b in zip(_step_outcomes_np(*ordered), _step_outcomes_nb(*ordered)):
        assert np.array_equal(a, b)


@needs_numba
def test_log_kernels_bit_identical(raw_draws):
    from trigjump._kernels import _log_step_kernels_nb

    params = base_params()
    args = kernel_args(params)
    z_dw, u_kind, z_size = raw_draws
    dw, region, kind, jump, _ = _step_outcomes_np(
        z_dw, u_kind, z_size,
        args["sqrt_tau"], args["shift"], args["thr_down"], args["thr_up"],
        args["p_up"], args["p_down"], args["nu_up"], args["nu_down"],
        args["del_up"], args["del_down"], args["base_drift"], args["sigma"],
    )
    shared = (
        dw, region, kind, jump,
        0.14, 9.8e-5,
        np.array([-0.4, -0.8]), np.array([0.6, 0.3]),
        np.array([0.01, 0.02]),
    )
    assert np.array_equal(_log_step_kernels_np(*shared), _log_step_kernels_nb(*shared))


@needs_numba
def test_simulation_identical_across_backends(monkeypatch):
    params = base_params()
    monkeypatch.setenv("TRIGJUMP_BACKEND", "numba")
    via_numba = simulate_p(params, 100.0, 5, 20_000, SeedSpec(4242))
    monkeypatch.setenv("TRIGJUMP_BACKEND", "numpy")
    via_numpy = simulate_p(params, 100.0, 5, 20_000, SeedSpec(4242))
    for field in ("dw", "region", "jump_kind", "jump_size", "log_returns"):
        assert np.array_equal(getattr(via_numba, field), getattr(via_numpy, field))


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("TRIGJUMP_BACKEND", "numpy")
    assert active_backend() == "numpy"
    monkeypatch.delenv("TRIGJUMP_BACKEND")
    assert active_backend() in ("numba", "numpy")
    monkeypatch.setenv("TRIGJUMP_BACKEND", "metal")
    with pytest.raises(RuntimeError, match="invalid"):
        active_backend()


@needs_numba
def test_thread_count_does_not_change_results():
    import numba

    params = base_params()
    before = numba.get_num_threads()
    try:
        numba.set_num_threads(1)
        single = simulate_p(params, 100.0, 4, 30_000, SeedSpec(777))
        numba.set_num_threads(numba.config.NUMBA_NUM_THREADS)
        many = simulate_p(params, 100.0, 4, 30_000, SeedSpec(777))
    finally:
        numba.set_num_threads(before)
    for field in ("dw", "region", "jump_kind", "jump_size", "log_returns"):
        assert np.array_equal(getattr(single, field), getattr(many, field))
