"""Radon-Nikodym kernels of the change of measure.

One step contributes the product of a Girsanov factor for the diffusion and
an Esscher factor for the jump component,

    L_step = exp(-gamma_d * sigma * dW - (gamma_d * sigma)^2 * tau / 2) * Psi,

where ``Psi`` is 1 in the Normal region and, inside a trigger region with
normalizer Z, equals ``exp(eta * J) / Z`` on a jump and ``1 / Z`` on the
no-jump atom.  Multi-step kernels multiply step kernels; everything is
accumulated in log space and exponentiated once at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _kernels as kernels
from ._normal import cdf
from .esscher import RiskNeutralSpec, RiskPremia, cgf, risk_neutralize
from .model import ModelParams, Region, classify_region

__all__ = [
    "JumpKind",
    "StepOutcome",
    "diffusion_kernel",
    "jump_kernel",
    "step_kernel",
    "path_kernel",
    "log_step_kernels",
    "conditional_jump_kernel_mean",
    "expected_step_kernel",
]


class JumpKind(IntEnum):
    """Which mixture component fired at a step."""

    NONE = 0
    UP = 1
    DOWN = -1


@dataclass(frozen=True)
class StepOutcome:
    """Everything observed in one step that the kernels depend on.

    ``dw`` is the diffusion increment that drives the trigger (under the
    pricing measure it is the shifted trigger variable, classified the same
    way).  Construction enforces the structural invariants: no jump outside
    a trigger region, and a zero jump size exactly when no jump fired.
    """

    dw: float
    region: Region
    jump_kind: JumpKind
    jump_size: float

    def __post_init__(self) -> None:
        if self.region == Region.NORMAL and self.jump_kind != JumpKind.NONE:
            raise ValueError("jump recorded in the Normal region")
        if self.jump_kind == JumpKind.NONE and self.jump_size != 0.0:
            raise ValueError(
                f"jump size must be 0 without a jump, got {self.jump_size!r}"
            )


def diffusion_kernel(dw: float, params: ModelParams, premia: RiskPremia) -> float:
    """Girsanov factor removing the diffusion risk premium from one step."""
    dw = float(dw)
    if not math.isfinite(dw):
        raise ValueError(f"diffusion increment must be finite, got {dw!r}")
    return math.exp(_log_diffusion_kernel(dw, params, premia))


def _log_diffusion_kernel(dw: float, params: ModelParams, premia: RiskPremia) -> float:
    gs = premia.gamma_d * params.sigma
    return -(gs * dw) - 0.5 * gs * gs * params.tau


def _log_jump_kernel(outcome: StepOutcome, rn: RiskNeutralSpec, premia: RiskPremia) -> float:
    if outcome.region == Region.NORMAL:
        return 0.0
    eta_up, eta_down = premia.etas(outcome.region)
    log_z = math.log(rn.region(outcome.region).z)
    if outcome.jump_kind == JumpKind.UP:
        return eta_up * outcome.jump_size - log_z
    if outcome.jump_kind == JumpKind.DOWN:
        return eta_down * outcome.jump_size - log_z
    return -log_z


def jump_kernel(
    outcome: StepOutcome,
    rn: RiskNeutralSpec,
    params: ModelParams,
    premia: RiskPremia,
) -> float:
    """Esscher factor of one step.

    Raises:
        ValueError: if the recorded region contradicts ``outcome.dw`` under
            ``params`` (the outcome was produced by different parameters).
    """
    actual = classify_region(outcome.dw, params)
    if actual != outcome.region:
        raise ValueError(
            f"outcome region {outcome.region.name} inconsistent with "
            f"dw={outcome.dw!r} (classifies as {actual.name})"
        )
    return math.exp(_log_jump_kernel(outcome, rn, premia))


def step_kernel(
    outcome: StepOutcome,
    rn: RiskNeutralSpec,
    params: ModelParams,
    premia: RiskPremia,
) -> float:
    """One-step Radon-Nikodym kernel: diffusion factor times jump factor."""
    actual = classify_region(outcome.dw, params)
    if actual != outcome.region:
        raise ValueError(
            f"outcome region {outcome.region.name} inconsistent with "
            f"dw={outcome.dw!r} (classifies as {actual.name})"
        )
    return math.exp(
        _log_diffusion_kernel(outcome.dw, params, premia)
        + _log_jump_kernel(outcome, rn, premia)
    )


def path_kernel(
    steps,
    rn: RiskNeutralSpec,
    params: ModelParams,
    premia: RiskPremia,
) -> float:
    """Kernel of a whole path: the product of its step kernels.

    An empty sequence of steps yields 1 (the empty product), so the kernel
    is well defined at the path start.
    """
    total = 0.0
    for outcome in steps:
        actual = classify_region(outcome.dw, params)
        if actual != outcome.region:
            raise ValueError(
                f"outcome region {outcome.region.name} inconsistent with "
                f"dw={outcome.dw!r} (classifies as {actual.name})"
            )
        total += _log_diffusion_kernel(outcome.dw, params, premia)
        total += _log_jump_kernel(outcome, rn, premia)
    return math.exp(total)


def log_step_kernels(
    dw: np.ndarray,
    region: np.ndarray,
    jump_kind: np.ndarray,
    jump_size: np.ndarray,
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
) -> np.ndarray:
    """Vectorized log step kernels over outcome arrays.

    Arrays share one shape, typically (n_paths, n_steps); summing the result
    over the step axis and exponentiating gives path kernels.  Region codes
    follow :class:`~trigjump.model.Region`, jump kinds follow
    :class:`JumpKind`.
    """
    if rn is None:
        rn = risk_neutralize(params, premia)
    gs = premia.gamma_d * params.sigma
    eta_up = np.array([premia.eta_down_up, premia.eta_up_up])
    eta_down = np.array([premia.eta_down_down, premia.eta_up_down])
    log_z = np.array([math.log(rn.down.z), math.log(rn.up.z)])
    return kernels.log_step_kernels(
        np.asarray(dw, dtype=np.float64),
        np.asarray(region, dtype=np.uint8),
        np.asarray(jump_kind, dtype=np.int8),
        np.asarray(jump_size, dtype=np.float64),
        gamma_sigma=gs,
        half_gs2_tau=0.5 * gs * gs * params.tau,
        eta_up=eta_up,
        eta_down=eta_down,
        log_z=log_z,
    )


def conditional_jump_kernel_mean(
    region: Region,
    rn: RiskNeutralSpec,
    params: ModelParams,
    premia: RiskPremia,
) -> float:
    """E[Psi | region] in closed form.

    Within a trigger region the mixture average of ``exp(eta * J)`` is the
    normalizer Z itself, so the conditional mean is Z / Z = 1; the Normal
    region is identically 1.  Exposed so the unit-mean property can be
    checked without Monte Carlo.
    """
    if region == Region.NORMAL:
        return 1.0
    spec = params.region_spec(region)
    eta_up, eta_down = premia.etas(region)
    avg = (
        spec.p_up * math.exp(cgf(spec.law_up, eta_up))
        + spec.p_down * math.exp(cgf(spec.law_down, eta_down))
        + spec.p_none
    )
    return avg / rn.region(region).z


def expected_step_kernel(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
) -> float:
    """E[step kernel] in closed form; equals 1 for every valid input.

    The diffusion factor times the N(0, tau) density is the density of
    N(-gamma_d * sigma * tau, tau), so the expectation reduces to shifted
    Gaussian region masses times the conditional jump-kernel means.  Kept
    as an explicit sum rather than the constant 1 so tests exercise the
    law-of-total-expectation route.
    """
    if rn is None:
        rn = risk_neutralize(params, premia)
    shift = premia.gamma_d * params.sigma * math.sqrt(params.tau)
    mass_down = float(cdf(params.b_down + shift))
    mass_up = float(cdf(-(params.b_up + shift)))
    mass_normal = 1.0 - mass_down - mass_up
    return (
        mass_down * conditional_jump_kernel_mean(Region.DOWN, rn, params, premia)
        + mass_normal * 1.0
        + mass_up * conditional_jump_kernel_mean(Region.UP, rn, params, premia)
    )
