"""No-arbitrage drift condition and the diffusion-premium calibration.

Discounted prices are martingales under the pricing measure iff

    mu = r + gamma_d * sigma^2 - ln(E[M(X)]) / tau,

where X ~ N(G * tau, tau) with G = sigma * (1 - gamma_d) and M is the
conditional jump moment-generating factor: a three-level step function equal
to the tilted-mixture mean of exp(J) inside each trigger region and 1 in
the band.  The expectation collapses to Gaussian CDF terms because M is
piecewise constant, so the whole condition is closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ._normal import cdf
from .esscher import RiskNeutralSpec, RiskPremia, risk_neutralize
from .model import ModelParams, Region, classify_region, validate

__all__ = [
    "DriftReport",
    "CalibrationResult",
    "NoRootInBracket",
    "region_moment_levels",
    "conditional_mgf",
    "gaussian_expectation",
    "no_arbitrage_drift",
    "calibrate_gamma",
]


class NoRootInBracket(RuntimeError):
    """The calibration target is not attained anywhere in the bracket."""


@dataclass(frozen=True)
class DriftReport:
    """No-arbitrage drift with its decomposition.

    ``mu = risk_free + diffusion_premium + jump_adjustment`` exactly; the
    jump adjustment is ``-ln(expectation) / tau`` where ``expectation`` is
    the Gaussian expectation of the step function with levels
    ``(level_down, 1, level_up)``.
    """

    mu: float
    risk_free: float
    diffusion_premium: float
    jump_adjustment: float
    expectation: float
    level_down: float
    level_up: float


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of solving the drift condition for gamma_d.

    ``gamma_d`` is the root closest to zero.  ``roots`` lists every root
    found in the bracket and ``monotone`` reports whether the drift was
    strictly monotone over the scanned bracket; non-monotone profiles can
    hide multiple admissible premia, so callers should inspect ``roots``
    before trusting uniqueness.
    """

    gamma_d: float
    roots: tuple[float, ...]
    monotone: bool

    @property
    def unique(self) -> bool:
        return len(self.roots) == 1


def _region_level(rn_region) -> float:
    """Tilted-mixture mean of exp(J) in one trigger region."""
    e_up = math.exp(rn_region.law_up.nu + 0.5 * rn_region.law_up.delta ** 2)
    e_down = math.exp(rn_region.law_down.nu + 0.5 * rn_region.law_down.delta ** 2)
    return rn_region.q_up * e_up + rn_region.q_down * e_down + rn_region.q_none


def region_moment_levels(rn: RiskNeutralSpec) -> tuple[float, float]:
    """(Down-region level, Up-region level) of the step function M."""
    return _region_level(rn.down), _region_level(rn.up)


def conditional_mgf(
    x: float,
    rn: RiskNeutralSpec,
    params: ModelParams,
) -> float:
    """M(x): expected exp(jump) given the trigger variable lands at x.

    Piecewise constant with value 1 in the Normal band and the tilted
    mixture mean of exp(J) in each trigger region.
    """
    region = classify_region(x, params)
    if region == Region.NORMAL:
        return 1.0
    return _region_level(rn.region(region))


def _expectation_given_gamma(
    level_down: float,
    level_up: float,
    params: ModelParams,
    gamma_d: float,
) -> float:
    """E[M(X)] for X ~ N(G tau, tau) via Gaussian region masses."""
    root_tau = math.sqrt(params.tau)
    g = params.sigma * (1.0 - gamma_d)
    a_down = params.b_down - g * root_tau
    a_up = params.b_up - g * root_tau
    phi_down = float(cdf(a_down))
    phi_up = float(cdf(a_up))
    return level_down * phi_down + (phi_up - phi_down) + level_up * (1.0 - phi_up)


def gaussian_expectation(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
) -> float:
    """Closed-form E[M(X)], X ~ N(sigma (1 - gamma_d) tau, tau).

    This is the quantity whose log enters the drift condition; it is
    strictly positive and equals 1 whenever both region levels are 1 or the
    thresholds push the trigger regions to negligible mass.
    """
    if rn is None:
        rn = risk_neutralize(params, premia)
    level_down, level_up = region_moment_levels(rn)
    return _expectation_given_gamma(level_down, level_up, params, premia.gamma_d)


def no_arbitrage_drift(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
) -> DriftReport:
    """Drift that makes the discounted price a pricing-measure martingale.

    Ignores ``params.mu`` (the drift is the output here) and depends only
    on the remaining parameters and the premia.
    """
    problems = validate(params)
    if problems:
        raise ValueError("invalid model parameters: " + "; ".join(problems))
    if rn is None:
        rn = risk_neutralize(params, premia)
    level_down, level_up = region_moment_levels(rn)
    expectation = _expectation_given_gamma(level_down, level_up, params, premia.gamma_d)
    diffusion_premium = premia.gamma_d * params.sigma ** 2
    jump_adjustment = -math.log(expectation) / params.tau
    return DriftReport(
        mu=params.r + diffusion_premium + jump_adjustment,
        risk_free=params.r,
        diffusion_premium=diffusion_premium,
        jump_adjustment=jump_adjustment,
        expectation=expectation,
        level_down=level_down,
        level_up=level_up,
    )


def calibrate_gamma(
    params: ModelParams,
    premia: RiskPremia,
    target_mu: float,
    bracket: tuple[float, float] = (-50.0, 50.0),
    scan_points: int = 256,
) -> CalibrationResult:
    """Solve the drift condition for the diffusion premium gamma_d.

    The jump tilts in ``premia`` are held fixed (the region levels do not
    depend on gamma_d); ``premia.gamma_d`` itself is ignored.  The bracket
    is scanned on a uniform grid, every sign change is refined to a root,
    and the root nearest zero is returned together with the full root list
    and a monotonicity flag.

    Raises:
        NoRootInBracket: if the target drift is not crossed anywhere in the
            bracket.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket!r}")
    if scan_points < 2:
        raise ValueError(f"scan_points must be >= 2, got {scan_points}")
    rn = risk_neutralize(params, premia)
    level_down, level_up = region_moment_levels(rn)

    def residual(gamma: float) -> float:
        expectation = _expectation_given_gamma(level_down, level_up, params, gamma)
        mu = (
            params.r
            + gamma * params.sigma ** 2
            - math.log(expectation) / params.tau
        )
        return mu - target_mu

    grid = [lo + (hi - lo) * i / (scan_points - 1) for i in range(scan_points)]
    values = [residual(g) for g in grid]

    diffs = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    monotone = all(d > 0.0 for d in diffs) or all(d < 0.0 for d in diffs)

    roots: list[float] = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            roots.append(float(brentq(residual, a, b, xtol=1e-14, rtol=8.9e-16)))
    if values[-1] == 0.0:
        roots.append(grid[-1])

    # collapse near-duplicates (a root sitting on a scan point shows twice)
    deduped: list[float] = []
    for root in sorted(roots):
        if not deduped or abs(root - deduped[-1]) > 1e-10 * max(1.0, abs(root)):
            deduped.append(root)
    if not deduped:
        raise NoRootInBracket(
            f"target drift {target_mu!r} not attained for gamma_d in "
            f"[{lo}, {hi}]"
        )
    best = min(deduped, key=abs)
    return CalibrationResult(gamma_d=best, roots=tuple(deduped), monotone=monotone)
