"""Independent quadrature oracles for the measure-change identities.

Every identity checked here has a closed form elsewhere in the package; the
oracle recomputes it by direct numerical integration against the Gaussian
density so the two routes share no integration code.  The integrands are
piecewise smooth with discontinuities exactly at the trigger thresholds, so
the grid is split there and each smooth piece gets its own ``n_points``-point
trapezoid rule.  Reported values are Richardson-extrapolated; the
extrapolation gap doubles as an error estimate and trips
:class:`GridRefinementError` when the grid is too coarse.  Truncation beyond
``half_width`` standard deviations is covered by an analytic Gaussian tail
bound returned with the value.

Jump moments enter the integrands either through the closed-form normal
moment generating function (``jump_integration="mgf"``) or through
Gauss-Hermite quadrature (``"gauss_hermite"``), the latter serving as a
redundant check of the MGF identities themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple

import numpy as np

from ._normal import sf
from .esscher import RiskNeutralSpec, RiskPremia, cgf, normalizer, risk_neutralize
from .model import JumpLaw, ModelParams, Region, validate

__all__ = [
    "GridSpec",
    "QuadResult",
    "GridRefinementError",
    "JumpIntegration",
    "expect_step_kernel",
    "expect_mq",
    "expect_q_return",
]

JumpIntegration = Literal["mgf", "gauss_hermite"]

# Refinement gate: the summed Richardson error estimate must stay below this.
REFINEMENT_TOL = 1e-9


class GridRefinementError(RuntimeError):
    """The quadrature grid is too coarse for the requested identity."""


class QuadResult(NamedTuple):
    """Quadrature value with its accuracy diagnostics.

    ``tail_bound`` bounds the mass ignored beyond the grid span;
    ``refinement_error`` is the Richardson estimate of the remaining
    discretization error.  Both are absolute.
    """

    value: float
    tail_bound: float
    refinement_error: float


@dataclass(frozen=True)
class GridSpec:
    """Quadrature controls.

    ``half_width`` is the grid span in standard deviations around the
    effective Gaussian center (at least 8, where the tail mass is below
    1e-15); ``n_points`` is the odd per-piece trapezoid resolution;
    ``gh_order`` is the Gauss-Hermite order of the redundant jump-moment
    mode.
    """

    half_width: float = 10.0
    n_points: int = 200_001
    gh_order: int = 64

    def __post_init__(self) -> None:
        if not (math.isfinite(self.half_width) and self.half_width >= 8.0):
            raise ValueError(f"half_width must be >= 8, got {self.half_width!r}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(f"n_points must be odd and >= 3, got {self.n_points!r}")
        if self.gh_order < 2:
            raise ValueError(f"gh_order must be >= 2, got {self.gh_order!r}")


def _exp_moment(law: JumpLaw, s: float, mode: JumpIntegration, order: int) -> float:
    """E[exp(s J)] for J ~ N(nu, delta^2), by MGF or Gauss-Hermite."""
    if mode == "mgf":
        return math.exp(cgf(law, s))
    if mode == "gauss_hermite":
        nodes, weights = np.polynomial.hermite.hermgauss(order)
        vals = np.exp(s * (law.nu + math.sqrt(2.0) * law.delta * nodes))
        return float(np.dot(weights, vals) / math.sqrt(math.pi))
    raise ValueError(f"unknown jump_integration mode {mode!r}")


def _refined_trapezoid(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    n_points: int,
) -> tuple[float, float]:
    """Richardson-extrapolated trapezoid on one smooth piece.

    Returns (value, error_estimate); the estimate is |I_h - I_2h| / 3,
    which also bounds the residual of the extrapolated value to leading
    order.
    """
    x = np.linspace(lo, hi, n_points)
    y = f(x)
    fine = float(np.trapezoid(y, x))
    coarse = float(np.trapezoid(y[::2], x[::2]))
    gap = (fine - coarse) / 3.0
    return fine + gap, abs(gap)


def _piecewise_gaussian_quad(
    level_fns: dict[Region, Callable[[np.ndarray], np.ndarray]],
    center: float,
    params: ModelParams,
    grid: GridSpec,
) -> tuple[float, float]:
    """Integrate a region-piecewise integrand over the grid span.

    The span is centered on the effective Gaussian mean and split exactly
    at the trigger thresholds; each non-empty piece uses the one-sided
    integrand of its region so the discontinuities never enter a rule.
    """
    root_tau = math.sqrt(params.tau)
    span = grid.half_width * root_tau
    lo, hi = center - span, center + span
    thr_down, thr_up = params.thresholds()
    pieces = (
        (lo, min(thr_down, hi), Region.DOWN),
        (max(lo, thr_down), min(thr_up, hi), Region.NORMAL),
        (max(lo, thr_up), hi, Region.UP),
    )
    total = 0.0
    err = 0.0
    for a, b, region in pieces:
        if b <= a:
            continue
        value, estimate = _refined_trapezoid(level_fns[region], a, b, grid.n_points)
        total += value
        err += estimate
    if err > REFINEMENT_TOL:
        raise GridRefinementError(
            f"Richardson error estimate {err:.3e} exceeds {REFINEMENT_TOL:.0e}; "
            f"increase n_points (got {grid.n_points})"
        )
    return total, err


def _gauss_density(x: np.ndarray, mean: float, tau: float) -> np.ndarray:
    return np.exp(-0.5 * (x - mean) ** 2 / tau) / math.sqrt(2.0 * math.pi * tau)


def _require_valid(params: ModelParams) -> None:
    problems = validate(params)
    if problems:
        raise ValueError("invalid model parameters: " + "; ".join(problems))


def expect_step_kernel(
    params: ModelParams,
    premia: RiskPremia,
    grid: GridSpec | None = None,
    jump_integration: JumpIntegration = "mgf",
) -> QuadResult:
    """Numerically integrate E[one-step Radon-Nikodym kernel]; expect 1.

    Renders the law-of-total-expectation argument directly: the Girsanov
    factor times the N(0, tau) density is integrated against the
    conditional jump-kernel mean of each region.
    """
    _require_valid(params)
    grid = grid or GridSpec()
    gs = premia.gamma_d * params.sigma
    tau = params.tau

    def conditional_mean(region: Region) -> float:
        if region == Region.NORMAL:
            return 1.0
        spec = params.region_spec(region)
        eta_up, eta_down = premia.etas(region)
        num = (
            spec.p_up * _exp_moment(spec.law_up, eta_up, jump_integration, grid.gh_order)
            + spec.p_down * _exp_moment(spec.law_down, eta_down, jump_integration, grid.gh_order)
            + spec.p_none
        )
        return num / normalizer(spec, eta_up, eta_down)

    def piece(region: Region) -> Callable[[np.ndarray], np.ndarray]:
        c = conditional_mean(region)

        def f(x: np.ndarray) -> np.ndarray:
            girsanov = np.exp(-(gs * x) - 0.5 * gs * gs * tau)
            return c * girsanov * _gauss_density(x, 0.0, tau)

        return f

    center = -gs * tau
    level_fns = {r: piece(r) for r in Region}
    value, err = _piecewise_gaussian_quad(level_fns, center, params, grid)
    c_max = max(conditional_mean(Region.DOWN), 1.0, conditional_mean(Region.UP))
    tail = c_max * 2.0 * float(sf(grid.half_width))
    return QuadResult(value=value, tail_bound=tail, refinement_error=err)


def expect_mq(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
    grid: GridSpec | None = None,
    jump_integration: JumpIntegration = "mgf",
) -> QuadResult:
    """Numerically integrate E[M(X)], X ~ N(sigma (1 - gamma_d) tau, tau).

    The quadrature counterpart of the closed-form Gaussian expectation in
    the drift condition: M is the region step function whose levels are the
    tilted-mixture means of exp(J).
    """
    _require_valid(params)
    grid = grid or GridSpec()
    if rn is None:
        rn = risk_neutralize(params, premia)
    tau = params.tau
    mean = params.sigma * (1.0 - premia.gamma_d) * tau

    def level(region: Region) -> float:
        if region == Region.NORMAL:
            return 1.0
        reg = rn.region(region)
        return (
            reg.q_up * _exp_moment(reg.law_up, 1.0, jump_integration, grid.gh_order)
            + reg.q_down * _exp_moment(reg.law_down, 1.0, jump_integration, grid.gh_order)
            + reg.q_none
        )

    def piece(region: Region) -> Callable[[np.ndarray], np.ndarray]:
        lvl = level(region)

        def f(x: np.ndarray) -> np.ndarray:
            return lvl * _gauss_density(x, mean, tau)

        return f

    level_fns = {r: piece(r) for r in Region}
    value, err = _piecewise_gaussian_quad(level_fns, mean, params, grid)
    lvl_max = max(level(Region.DOWN), 1.0, level(Region.UP))
    tail = lvl_max * 2.0 * float(sf(grid.half_width))
    return QuadResult(value=value, tail_bound=tail, refinement_error=err)


def expect_q_return(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
    grid: GridSpec | None = None,
    mu: float | None = None,
    jump_integration: JumpIntegration = "mgf",
) -> QuadResult:
    """Numerically integrate the pricing-measure one-step gross return.

    Computes E[L_step * S_step / S_0] entirely from physical-measure
    quantities: Girsanov factor, raw jump mixtures and the (1 + eta)-tilted
    jump moments.  With the no-arbitrage drift the result is exp(r tau);
    with a perturbed drift mu it is exp(mu - mu_star + r) tau away in the
    exponent, which callers use as a sharp negative control.
    """
    _require_valid(params)
    grid = grid or GridSpec()
    if rn is None:
        rn = risk_neutralize(params, premia)
    tau = params.tau
    sigma = params.sigma
    gs = premia.gamma_d * sigma
    mu_used = params.mu if mu is None else float(mu)
    base_drift = (mu_used - 0.5 * sigma * sigma) * tau

    def region_weight(region: Region) -> float:
        if region == Region.NORMAL:
            return 1.0
        spec = params.region_spec(region)
        eta_up, eta_down = premia.etas(region)
        num = (
            spec.p_up * _exp_moment(spec.law_up, 1.0 + eta_up, jump_integration, grid.gh_order)
            + spec.p_down * _exp_moment(spec.law_down, 1.0 + eta_down, jump_integration, grid.gh_order)
            + spec.p_none
        )
        return num / normalizer(spec, eta_up, eta_down)

    def piece(region: Region) -> Callable[[np.ndarray], np.ndarray]:
        w = region_weight(region)

        def f(x: np.ndarray) -> np.ndarray:
            girsanov = np.exp(-(gs * x) - 0.5 * gs * gs * tau)
            gross = np.exp(base_drift + sigma * x)
            return w * girsanov * gross * _gauss_density(x, 0.0, tau)

        return f

    # e^{sigma x} shifts the Girsanov-weighted Gaussian mean to sigma(1-gamma) tau
    center = (sigma - gs) * tau
    level_fns = {r: piece(r) for r in Region}
    value, err = _piecewise_gaussian_quad(level_fns, center, params, grid)
    w_max = max(region_weight(Region.DOWN), 1.0, region_weight(Region.UP))
    shift = -gs * tau
    prefactor = math.exp(base_drift + (center * center - shift * shift) / (2.0 * tau))
    tail = w_max * prefactor * 2.0 * float(sf(grid.half_width))
    return QuadResult(value=value, tail_bound=tail, refinement_error=err)
