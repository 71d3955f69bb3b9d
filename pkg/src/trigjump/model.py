"""Parameters and trigger-region classification for the threshold-triggered
jump-diffusion.

One step of length tau moves the log price by

    (mu - sigma^2 / 2) * tau + sigma * dW + J,

where the jump J is drawn only when the diffusion increment dW lands outside
the band [b_down * sqrt(tau), b_up * sqrt(tau)].  Each trigger region (Down /
Up) carries its own mixture of an up-jump law, a down-jump law and a no-jump
atom.  The band itself (boundaries included) never jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import IntEnum
from typing import Any, Mapping

__all__ = [
    "Region",
    "JumpLaw",
    "RegionJumpSpec",
    "ModelParams",
    "classify_region",
    "validate",
    "PROB_SUM_TOL",
]

# Ingest renormalizes probability triples whose sum is off by at most this;
# anything worse is rejected as a typo rather than float dust.
PROB_SUM_TOL = 1e-9


class Region(IntEnum):
    """Trigger region of a single diffusion increment."""

    NORMAL = 0
    DOWN = 1
    UP = 2


@dataclass(frozen=True)
class JumpLaw:
    """Normal law of a log jump size: N(nu, delta^2)."""

    nu: float
    delta: float

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "JumpLaw":
        return cls(nu=float(data["nu"]), delta=float(data["delta"]))

    def to_dict(self) -> dict[str, float]:
        return {"nu": self.nu, "delta": self.delta}


@dataclass(frozen=True)
class RegionJumpSpec:
    """Jump mixture attached to one trigger region.

    With probability ``p_up`` the jump is drawn from ``law_up``, with
    ``p_down`` from ``law_down``, and with ``p_none`` no jump occurs.  The
    three probabilities must sum to one; use :meth:`ingest` when reading
    external data so near-misses are renormalized and real errors rejected.
    """

    p_up: float
    p_down: float
    p_none: float
    law_up: JumpLaw
    law_down: JumpLaw

    @classmethod
    def ingest(
        cls,
        p_up: float,
        p_down: float,
        p_none: float,
        law_up: JumpLaw,
        law_down: JumpLaw,
    ) -> "RegionJumpSpec":
        """Build a spec from external data, renormalizing the probabilities.

        Raises:
            ValueError: if the probabilities sum to something farther than
                ``PROB_SUM_TOL`` from one, or any is negative / non-finite.
        """
        total = p_up + p_down + p_none
        if not math.isfinite(total) or abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(
                f"region jump probabilities sum to {total!r}; "
                f"expected 1 within {PROB_SUM_TOL}"
            )
        if min(p_up, p_down, p_none) < 0.0:
            raise ValueError("region jump probabilities must be non-negative")
        return cls(p_up / total, p_down / total, p_none / total, law_up, law_down)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RegionJumpSpec":
        return cls.ingest(
            p_up=float(data["p_up"]),
            p_down=float(data["p_down"]),
            p_none=float(data["p_none"]),
            law_up=JumpLaw.from_mapping(data["law_up"]),
            law_down=JumpLaw.from_mapping(data["law_down"]),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "p_up": self.p_up,
            "p_down": self.p_down,
            "p_none": self.p_none,
            "law_up": self.law_up.to_dict(),
            "law_down": self.law_down.to_dict(),
        }


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of the price process under the physical measure.

    Attributes:
        mu: drift of the log price per unit time.
        sigma: diffusion volatility, > 0.
        r: continuously compounded risk-free rate, >= 0.
        tau: step length in years, > 0.
        b_down: lower trigger threshold in sqrt(tau) units, < 0.
        b_up: upper trigger threshold in sqrt(tau) units, > 0.
        region_down: jump mixture active when dW < b_down * sqrt(tau).
        region_up: jump mixture active when dW > b_up * sqrt(tau).
    """

    mu: float
    sigma: float
    r: float
    tau: float
    b_down: float
    b_up: float
    region_down: RegionJumpSpec
    region_up: RegionJumpSpec

    def region_spec(self, region: Region) -> RegionJumpSpec:
        """Mixture for a jump region; the Normal region has no mixture."""
        if region == Region.DOWN:
            return self.region_down
        if region == Region.UP:
            return self.region_up
        raise ValueError("the Normal region carries no jump mixture")

    def thresholds(self) -> tuple[float, float]:
        """Trigger thresholds on the dW axis: (b_down, b_up) * sqrt(tau)."""
        root_tau = math.sqrt(self.tau)
        return self.b_down * root_tau, self.b_up * root_tau

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ModelParams":
        return cls(
            mu=float(data["mu"]),
            sigma=float(data["sigma"]),
            r=float(data["r"]),
            tau=float(data["tau"]),
            b_down=float(data["b_down"]),
            b_up=float(data["b_up"]),
            region_down=RegionJumpSpec.from_mapping(data["region_down"]),
            region_up=RegionJumpSpec.from_mapping(data["region_up"]),
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.to_dict() if isinstance(value, RegionJumpSpec) else value
        return out


def classify_region(dw: float, params: ModelParams) -> Region:
    """Classify a diffusion increment into its trigger region.

    Boundary values (dw exactly at a threshold) belong to the Normal region,
    so the partition is exhaustive and unambiguous.

    Raises:
        ValueError: if ``dw`` is NaN or infinite.
    """
    dw = float(dw)
    if not math.isfinite(dw):
        raise ValueError(f"diffusion increment must be finite, got {dw!r}")
    lo, hi = params.thresholds()
    if dw < lo:
        return Region.DOWN
    if dw > hi:
        return Region.UP
    return Region.NORMAL


def _check_prob(name: str, p: float, out: list[str]) -> None:
    if not math.isfinite(p) or not 0.0 <= p <= 1.0:
        out.append(f"{name}: must lie in [0, 1], got {p!r}")


def _check_region(name: str, spec: RegionJumpSpec, out: list[str]) -> None:
    _check_prob(f"{name}.p_up", spec.p_up, out)
    _check_prob(f"{name}.p_down", spec.p_down, out)
    _check_prob(f"{name}.p_none", spec.p_none, out)
    total = spec.p_up + spec.p_down + spec.p_none
    if not math.isfinite(total) or abs(total - 1.0) > 1e-12:
        out.append(f"{name}: probabilities sum to {total!r}, expected 1 within 1e-12")
    for kind in ("law_up", "law_down"):
        law: JumpLaw = getattr(spec, kind)
        if not math.isfinite(law.nu):
            out.append(f"{name}.{kind}.nu: must be finite, got {law.nu!r}")
        if not math.isfinite(law.delta) or law.delta <= 0.0:
            out.append(f"{name}.{kind}.delta: must be > 0, got {law.delta!r}")


def validate(params: ModelParams) -> list[str]:
    """Check every structural constraint; return one message per violation.

    An empty list means the parameter set is usable by every operation in
    the package.
    """
    out: list[str] = []
    if not math.isfinite(params.mu):
        out.append(f"mu: must be finite, got {params.mu!r}")
    if not math.isfinite(params.sigma) or params.sigma <= 0.0:
        out.append(f"sigma: must be > 0, got {params.sigma!r}")
    if not math.isfinite(params.r) or params.r < 0.0:
        out.append(f"r: must be >= 0, got {params.r!r}")
    if not math.isfinite(params.tau) or params.tau <= 0.0:
        out.append(f"tau: must be > 0, got {params.tau!r}")
    if not math.isfinite(params.b_down) or params.b_down >= 0.0:
        out.append(f"b_down: must be < 0, got {params.b_down!r}")
    if not math.isfinite(params.b_up) or params.b_up <= 0.0:
        out.append(f"b_up: must be > 0, got {params.b_up!r}")
    _check_region("region_down", params.region_down, out)
    _check_region("region_up", params.region_up, out)
    return out
