"""Exponential tilting of the region jump mixtures.

The pricing measure reweights each jump law ``N(nu, delta^2)`` by
``exp(eta * J)``.  Because the laws are normal the cumulant generating
function is available in closed form,

    cgf(eta) = eta * nu + eta^2 * delta^2 / 2,

so the per-region normalizer and the tilted mixture weights are exact
arithmetic, no integration involved.  A tilted normal stays normal: the mean
shifts to ``nu + eta * delta^2`` while ``delta`` is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping

from .model import JumpLaw, ModelParams, Region, RegionJumpSpec

__all__ = [
    "RiskPremia",
    "RiskNeutralSpec",
    "cgf",
    "normalizer",
    "risk_neutralize",
]


@dataclass(frozen=True)
class RiskPremia:
    """Market prices of risk: one diffusion premium, one tilt per jump law.

    ``gamma_d`` prices diffusion risk; ``eta_<region><direction>`` tilts the
    corresponding jump law (region ``d``/``u`` = Down/Up trigger region,
    direction ``u``/``d`` = up/down jump).  All zero recovers the physical
    measure for the jump component.
    """

    gamma_d: float
    eta_down_up: float
    eta_down_down: float
    eta_up_up: float
    eta_up_down: float

    def etas(self, region: Region) -> tuple[float, float]:
        """(eta for up jumps, eta for down jumps) in the given region."""
        if region == Region.DOWN:
            return self.eta_down_up, self.eta_down_down
        if region == Region.UP:
            return self.eta_up_up, self.eta_up_down
        raise ValueError("the Normal region has no jump tilts")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RiskPremia":
        return cls(
            gamma_d=float(data["gamma_d"]),
            eta_down_up=float(data["eta_down_up"]),
            eta_down_down=float(data["eta_down_down"]),
            eta_up_up=float(data["eta_up_up"]),
            eta_up_down=float(data["eta_up_down"]),
        )

    def to_dict(self) -> dict[str, float]:
        return {
            "gamma_d": self.gamma_d,
            "eta_down_up": self.eta_down_up,
            "eta_down_down": self.eta_down_down,
            "eta_up_up": self.eta_up_up,
            "eta_up_down": self.eta_up_down,
        }


@dataclass(frozen=True)
class RegionNeutral:
    """Tilted mixture of one trigger region under the pricing measure."""

    z: float            # normalizer of the region kernel
    q_up: float         # tilted probability of an up jump
    q_down: float
    q_none: float
    law_up: JumpLaw     # tilted laws: mean shifted, delta unchanged
    law_down: JumpLaw


@dataclass(frozen=True)
class RiskNeutralSpec:
    """Precomputed pricing-measure quantities consumed downstream.

    Holds the per-region normalizers and the tilted mixtures so simulators,
    kernels and the drift condition never recompute them.
    """

    down: RegionNeutral
    up: RegionNeutral

    def region(self, region: Region) -> RegionNeutral:
        if region == Region.DOWN:
            return self.down
        if region == Region.UP:
            return self.up
        raise ValueError("the Normal region is not tilted")


def cgf(law: JumpLaw, eta: float) -> float:
    """Cumulant generating function of ``N(nu, delta^2)`` at ``eta``."""
    eta = float(eta)
    if not math.isfinite(eta):
        raise ValueError(f"tilt parameter must be finite, got {eta!r}")
    if not (math.isfinite(law.nu) and math.isfinite(law.delta)):
        raise ValueError(f"jump law must have finite parameters, got {law!r}")
    return eta * law.nu + 0.5 * eta * eta * law.delta * law.delta


def normalizer(spec: RegionJumpSpec, eta_up: float, eta_down: float) -> float:
    """Normalizer of the tilted mixture in one region.

    Equals ``p_up * exp(cgf_up(eta_up)) + p_down * exp(cgf_down(eta_down))
    + p_none``; strictly positive whenever the probabilities are valid.
    """
    return (
        spec.p_up * math.exp(cgf(spec.law_up, eta_up))
        + spec.p_down * math.exp(cgf(spec.law_down, eta_down))
        + spec.p_none
    )


def _neutralize_region(spec: RegionJumpSpec, eta_up: float, eta_down: float) -> RegionNeutral:
    z = normalizer(spec, eta_up, eta_down)
    q_up = spec.p_up * math.exp(cgf(spec.law_up, eta_up)) / z
    q_down = spec.p_down * math.exp(cgf(spec.law_down, eta_down)) / z
    q_none = spec.p_none / z
    law_up = JumpLaw(spec.law_up.nu + eta_up * spec.law_up.delta ** 2, spec.law_up.delta)
    law_down = JumpLaw(spec.law_down.nu + eta_down * spec.law_down.delta ** 2, spec.law_down.delta)
    return RegionNeutral(z, q_up, q_down, q_none, law_up, law_down)


@lru_cache(maxsize=512)
def _risk_neutralize(params: ModelParams, premia: RiskPremia) -> RiskNeutralSpec:
    return RiskNeutralSpec(
        down=_neutralize_region(params.region_down, premia.eta_down_up, premia.eta_down_down),
        up=_neutralize_region(params.region_up, premia.eta_up_up, premia.eta_up_down),
    )


def risk_neutralize(params: ModelParams, premia: RiskPremia) -> RiskNeutralSpec:
    """Tilt both trigger regions and cache the result per (params, premia).

    The tilted weights of each region sum to one by construction; the tilted
    jump means are ``nu + eta * delta^2`` with unchanged ``delta``.
    """
    return _risk_neutralize(params, premia)
