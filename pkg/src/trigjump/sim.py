"""Path simulation under the physical and pricing measures.

Both simulators consume the same per-(path, step) draw layout from
:mod:`trigjump.rng`, so a path index always maps to the same underlying
randomness: under the pricing measure the trigger variable is the same
Gaussian draw shifted by ``-gamma_d * sigma * tau`` and the jump mixture is
replaced by its tilted version.  Outputs are pure functions of
(seed, parameters), independent of chunk size, backend and thread count.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterator, Literal

import numpy as np

from . import _kernels as kernels
from . import rng
from .esscher import RiskNeutralSpec, RiskPremia, risk_neutralize
from .measure import JumpKind, StepOutcome
from .model import ModelParams, Region, validate

__all__ = [
    "SeedSpec",
    "Path",
    "PathBatch",
    "simulate_p",
    "simulate_q",
    "write_paths_csv",
    "PATHS_CSV_COLUMNS",
    "MuMode",
]

DEFAULT_CHUNK = 1 << 16

MuMode = Literal["use_no_arbitrage_mu", "use_params_mu"]

PATHS_CSV_COLUMNS = (
    "path",
    "step",
    "dw",
    "region",
    "jump_kind",
    "jump_size",
    "log_return",
    "price",
)

_KIND_LABELS = {1: "up", 0: "none", -1: "down"}


@dataclass(frozen=True)
class SeedSpec:
    """Master seed of a batch; every draw is a pure function of it."""

    master_seed: int

    def __post_init__(self) -> None:
        if not isinstance(self.master_seed, int) or isinstance(self.master_seed, bool):
            raise ValueError(f"master_seed must be an int, got {self.master_seed!r}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f"master_seed must be a uint64, got {self.master_seed!r}")


@dataclass(frozen=True)
class Path:
    """One simulated path in object form (convenience view of a batch row)."""

    s0: float
    steps: tuple[StepOutcome, ...]
    log_returns: np.ndarray
    prices: np.ndarray  # length n_steps + 1, prices[0] == s0


@dataclass(frozen=True)
class PathBatch:
    """Column-oriented batch of simulated paths.

    All step arrays are (n_paths, n_steps).  ``dw`` holds the trigger
    variable that was classified into regions; under the pricing measure it
    is the shifted increment, so kernels and classification apply verbatim.
    """

    s0: float
    tau: float
    mu_used: float
    measure: str  # "p" or "q"
    dw: np.ndarray
    region: np.ndarray
    jump_kind: np.ndarray
    jump_size: np.ndarray
    log_returns: np.ndarray

    @property
    def n_paths(self) -> int:
        return self.dw.shape[0]

    @property
    def n_steps(self) -> int:
        return self.dw.shape[1]

    def __len__(self) -> int:
        return self.n_paths

    def price_paths(self) -> np.ndarray:
        """Prices including the start column: (n_paths, n_steps + 1)."""
        levels = self.s0 * np.exp(np.cumsum(self.log_returns, axis=1))
        out = np.empty((self.n_paths, self.n_steps + 1), dtype=np.float64)
        out[:, 0] = self.s0
        out[:, 1:] = levels
        return out

    def terminal_prices(self) -> np.ndarray:
        return self.s0 * np.exp(np.sum(self.log_returns, axis=1))

    def path(self, i: int) -> Path:
        steps = tuple(
            StepOutcome(
                dw=float(self.dw[i, t]),
                region=Region(int(self.region[i, t])),
                jump_kind=JumpKind(int(self.jump_kind[i, t])),
                jump_size=float(self.jump_size[i, t]),
            )
            for t in range(self.n_steps)
        )
        prices = self.price_paths()[i]
        return Path(
            s0=self.s0,
            steps=steps,
            log_returns=self.log_returns[i].copy(),
            prices=prices,
        )

    def __getitem__(self, i: int) -> Path:
        return self.path(i)

    def __iter__(self) -> Iterator[Path]:
        return (self.path(i) for i in range(self.n_paths))


def _require_valid(params: ModelParams, s0: float, n_steps: int, n_paths: int) -> None:
    problems = validate(params)
    if problems:
        raise ValueError("invalid model parameters: " + "; ".join(problems))
    if not (math.isfinite(s0) and s0 > 0.0):
        raise ValueError(f"s0 must be > 0, got {s0!r}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")


def _simulate(
    params: ModelParams,
    mu_used: float,
    shift: float,
    p_up: np.ndarray,
    p_down: np.ndarray,
    nu_up: np.ndarray,
    nu_down: np.ndarray,
    del_up: np.ndarray,
    del_down: np.ndarray,
    s0: float,
    n_steps: int,
    n_paths: int,
    seeds: SeedSpec,
    measure: str,
    chunk_size: int,
) -> PathBatch:
    sqrt_tau = math.sqrt(params.tau)
    thr_down, thr_up = params.thresholds()
    base_drift = (mu_used - 0.5 * params.sigma ** 2) * params.tau

    dw = np.empty((n_paths, n_steps), dtype=np.float64)
    region = np.empty((n_paths, n_steps), dtype=np.uint8)
    kind = np.empty((n_paths, n_steps), dtype=np.int8)
    jump = np.empty((n_paths, n_steps), dtype=np.float64)
    log_ret = np.empty((n_paths, n_steps), dtype=np.float64)

    for lo in range(0, n_paths, chunk_size):
        hi = min(lo + chunk_size, n_paths)
        u = rng.path_uniforms(seeds.master_seed, lo, hi, n_steps)
        z_dw = rng.gaussian_from_uniform(u[:, :, 0])
        u_kind = np.ascontiguousarray(u[:, :, 1])
        z_size = rng.gaussian_from_uniform(u[:, :, 2])
        out = kernels.step_outcomes(
            z_dw, u_kind, z_size,
            sqrt_tau=sqrt_tau, shift=shift,
            thr_down=thr_down, thr_up=thr_up,
            p_up=p_up, p_down=p_down,
            nu_up=nu_up, nu_down=nu_down,
            del_up=del_up, del_down=del_down,
            base_drift=base_drift, sigma=params.sigma,
        )
        dw[lo:hi], region[lo:hi], kind[lo:hi], jump[lo:hi], log_ret[lo:hi] = out

    return PathBatch(
        s0=float(s0), tau=params.tau, mu_used=float(mu_used), measure=measure,
        dw=dw, region=region, jump_kind=kind, jump_size=jump, log_returns=log_ret,
    )


def simulate_p(
    params: ModelParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    seeds: SeedSpec,
    *,
    chunk_size: int = DEFAULT_CHUNK,
) -> PathBatch:
    """Simulate paths under the physical measure."""
    _require_valid(params, s0, n_steps, n_paths)
    p_up = np.array([params.region_down.p_up, params.region_up.p_up])
    p_down = np.array([params.region_down.p_down, params.region_up.p_down])
    nu_up = np.array([params.region_down.law_up.nu, params.region_up.law_up.nu])
    nu_down = np.array([params.region_down.law_down.nu, params.region_up.law_down.nu])
    del_up = np.array([params.region_down.law_up.delta, params.region_up.law_up.delta])
    del_down = np.array([params.region_down.law_down.delta, params.region_up.law_down.delta])
    return _simulate(
        params, params.mu, 0.0,
        p_up, p_down, nu_up, nu_down, del_up, del_down,
        s0, n_steps, n_paths, seeds, "p", chunk_size,
    )


def simulate_q(
    params: ModelParams,
    premia: RiskPremia,
    rn: RiskNeutralSpec | None = None,
    *,
    s0: float,
    n_steps: int,
    n_paths: int,
    seeds: SeedSpec,
    mu_mode: MuMode = "use_no_arbitrage_mu",
    chunk_size: int = DEFAULT_CHUNK,
) -> PathBatch:
    """Simulate paths directly under the pricing measure.

    The trigger variable is ``sqrt(tau) * Z - gamma_d * sigma * tau`` and the
    jump mixtures are the tilted ones.  With ``use_no_arbitrage_mu`` (the
    default) the drift solves the no-arbitrage condition, making discounted
    prices martingales; ``use_params_mu`` keeps ``params.mu`` so deliberate
    violations can be simulated.
    """
    _require_valid(params, s0, n_steps, n_paths)
    if rn is None:
        rn = risk_neutralize(params, premia)
    if mu_mode == "use_no_arbitrage_mu":
        from .drift import no_arbitrage_drift  # deferred: drift imports model+esscher only

        mu_used = no_arbitrage_drift(params, premia, rn).mu
    elif mu_mode == "use_params_mu":
        mu_used = params.mu
    else:
        raise ValueError(f"unknown mu_mode {mu_mode!r}")
    shift = -premia.gamma_d * params.sigma * params.tau
    p_up = np.array([rn.down.q_up, rn.up.q_up])
    p_down = np.array([rn.down.q_down, rn.up.q_down])
    nu_up = np.array([rn.down.law_up.nu, rn.up.law_up.nu])
    nu_down = np.array([rn.down.law_down.nu, rn.up.law_down.nu])
    del_up = np.array([rn.down.law_up.delta, rn.up.law_up.delta])
    del_down = np.array([rn.down.law_down.delta, rn.up.law_down.delta])
    return _simulate(
        params, mu_used, shift,
        p_up, p_down, nu_up, nu_down, del_up, del_down,
        s0, n_steps, n_paths, seeds, "q", chunk_size,
    )


def write_paths_csv(batch: PathBatch, stream: IO[str]) -> None:
    """Write a batch as one CSV row per (path, step).

    Floats are rendered with ``repr`` (shortest round-trip form), so equal
    batches serialize to byte-identical files.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PATHS_CSV_COLUMNS)
    prices = batch.price_paths()
    for i in range(batch.n_paths):
        for t in range(batch.n_steps):
            writer.writerow(
                (
                    i,
                    t,
                    repr(float(batch.dw[i, t])),
                    int(batch.region[i, t]),
                    _KIND_LABELS[int(batch.jump_kind[i, t])],
                    repr(float(batch.jump_size[i, t])),
                    repr(float(batch.log_returns[i, t])),
                    repr(float(prices[i, t + 1])),
                )
            )
