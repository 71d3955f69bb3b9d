"""Hot elementwise kernels with a numba fast path and a numpy fallback.

Backend choice comes from the ``TRIGJUMP_BACKEND`` environment variable:
``auto`` (default, numba when importable), ``numba`` or ``numpy``.  Both
implementations perform the same IEEE operations in the same order per
element and contain no cross-element reductions, so their outputs are
bit-identical and independent of thread count or chunking.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

# numba probes TBB first and warns when only an older TBB is present; the
# probe falls back to another threading layer, so the warning is noise.
warnings.filterwarnings(
    "ignore", message="The TBB threading layer requires TBB version"
)

try:
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency here
    HAS_NUMBA = False

BACKEND_ENV_VAR = "TRIGJUMP_BACKEND"


def active_backend() -> str:
    """Resolve the backend name requested by the environment."""
    choice = os.environ.get(BACKEND_ENV_VAR, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError(
                f"{BACKEND_ENV_VAR}=numba requested but numba is not importable"
            )
        return "numba"
    raise RuntimeError(
        f"invalid {BACKEND_ENV_VAR}={choice!r}; expected auto, numba or numpy"
    )


def step_outcomes(
    z_dw: np.ndarray,
    u_kind: np.ndarray,
    z_size: np.ndarray,
    *,
    sqrt_tau: float,
    shift: float,
    thr_down: float,
    thr_up: float,
    p_up: np.ndarray,
    p_down: np.ndarray,
    nu_up: np.ndarray,
    nu_down: np.ndarray,
    del_up: np.ndarray,
    del_down: np.ndarray,
    base_drift: float,
    sigma: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Turn raw draws into per-step outcomes.

    Inputs are (n_paths, n_steps) arrays of standard normals (``z_dw``,
    ``z_size``) and uniforms (``u_kind``); the two-element parameter arrays
    are indexed by trigger region (Down, Up).  ``shift`` relocates the
    trigger variable (0 under the physical measure, -gamma_d*sigma*tau under
    the pricing measure).  Returns (dw, region, kind, jump, log_return).
    """
    args = (
        z_dw, u_kind, z_size,
        float(sqrt_tau), float(shift), float(thr_down), float(thr_up),
        np.ascontiguousarray(p_up, dtype=np.float64),
        np.ascontiguousarray(p_down, dtype=np.float64),
        np.ascontiguousarray(nu_up, dtype=np.float64),
        np.ascontiguousarray(nu_down, dtype=np.float64),
        np.ascontiguousarray(del_up, dtype=np.float64),
        np.ascontiguousarray(del_down, dtype=np.float64),
        float(base_drift), float(sigma),
    )
    if active_backend() == "numba":
        return _step_outcomes_nb(*args)
    return _step_outcomes_np(*args)


def log_step_kernels(
    dw: np.ndarray,
    region: np.ndarray,
    kind: np.ndarray,
    jump: np.ndarray,
    *,
    gamma_sigma: float,
    half_gs2_tau: float,
    eta_up: np.ndarray,
    eta_down: np.ndarray,
    log_z: np.ndarray,
) -> np.ndarray:
    """Log Radon-Nikodym factor per step over outcome arrays."""
    args = (
        dw, region, kind, jump,
        float(gamma_sigma), float(half_gs2_tau),
        np.ascontiguousarray(eta_up, dtype=np.float64),
        np.ascontiguousarray(eta_down, dtype=np.float64),
        np.ascontiguousarray(log_z, dtype=np.float64),
    )
    if active_backend() == "numba":
        return _log_step_kernels_nb(*args)
    return _log_step_kernels_np(*args)


def _step_outcomes_np(
    z_dw, u_kind, z_size,
    sqrt_tau, shift, thr_down, thr_up,
    p_up, p_down, nu_up, nu_down, del_up, del_down,
    base_drift, sigma,
):
    dw = sqrt_tau * z_dw + shift
    region = np.zeros(dw.shape, dtype=np.uint8)
    region[dw < thr_down] = 1
    region[dw > thr_up] = 2
    idx = np.where(region == 0, 0, region - 1).astype(np.intp)
    a = p_up[idx]
    b = a + p_down[idx]
    triggered = region != 0
    up = triggered & (u_kind < a)
    down = triggered & ~up & (u_kind < b)
    jump = np.zeros(dw.shape, dtype=np.float64)
    jump[up] = nu_up[idx[up]] + del_up[idx[up]] * z_size[up]
    jump[down] = nu_down[idx[down]] + del_down[idx[down]] * z_size[down]
    kind = np.zeros(dw.shape, dtype=np.int8)
    kind[up] = 1
    kind[down] = -1
    log_ret = (base_drift + sigma * dw) + jump
    return dw, region, kind, jump, log_ret


def _log_step_kernels_np(
    dw, region, kind, jump,
    gamma_sigma, half_gs2_tau,
    eta_up, eta_down, log_z,
):
    out = -(gamma_sigma * dw) - half_gs2_tau
    idx = np.where(region == 0, 0, region - 1).astype(np.intp)
    tilt = np.zeros(dw.shape, dtype=np.float64)
    up = kind == 1
    down = kind == -1
    tilt[up] = eta_up[idx[up]] * jump[up]
    tilt[down] = eta_down[idx[down]] * jump[down]
    lz = np.where(region == 0, 0.0, log_z[idx])
    return out + (tilt - lz)


if HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _step_outcomes_nb(
        z_dw, u_kind, z_size,
        sqrt_tau, shift, thr_down, thr_up,
        p_up, p_down, nu_up, nu_down, del_up, del_down,
        base_drift, sigma,
    ):  # pragma: no cover - exercised via backend dispatch
        n, m = z_dw.shape
        dw = np.empty((n, m), dtype=np.float64)
        region = np.zeros((n, m), dtype=np.uint8)
        kind = np.zeros((n, m), dtype=np.int8)
        jump = np.zeros((n, m), dtype=np.float64)
        log_ret = np.empty((n, m), dtype=np.float64)
        for i in prange(n):
            for t in range(m):
                x = sqrt_tau * z_dw[i, t] + shift
                dw[i, t] = x
                j = 0
                if x < thr_down:
                    j = 1
                elif x > thr_up:
                    j = 2
                jv = 0.0
                if j != 0:
                    region[i, t] = j
                    k = j - 1
                    a = p_up[k]
                    b = a + p_down[k]
                    u = u_kind[i, t]
                    if u < a:
                        kind[i, t] = 1
                        jv = nu_up[k] + del_up[k] * z_size[i, t]
                        jump[i, t] = jv
                    elif u < b:
                        kind[i, t] = -1
                        jv = nu_down[k] + del_down[k] * z_size[i, t]
                        jump[i, t] = jv
                log_ret[i, t] = (base_drift + sigma * x) + jv
        return dw, region, kind, jump, log_ret

    @njit(cache=True, parallel=True)
    def _log_step_kernels_nb(
        dw, region, kind, jump,
        gamma_sigma, half_gs2_tau,
        eta_up, eta_down, log_z,
    ):  # pragma: no cover - exercised via backend dispatch
        n, m = dw.shape
        out = np.empty((n, m), dtype=np.float64)
        for i in prange(n):
            for t in range(m):
                base = -(gamma_sigma * dw[i, t]) - half_gs2_tau
                j = region[i, t]
                tilt = 0.0
                lz = 0.0
                if j != 0:
                    k = j - 1
                    lz = log_z[k]
                    if kind[i, t] == 1:
                        tilt = eta_up[k] * jump[i, t]
                    elif kind[i, t] == -1:
                        tilt = eta_down[k] * jump[i, t]
                out[i, t] = base + (tilt - lz)
        return out
