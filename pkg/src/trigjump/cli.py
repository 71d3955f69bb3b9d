"""Command-line entry point.

Subcommands: ``validate``, ``drift``, ``simulate``, ``price``, ``rn-check``.
Exit codes: 0 success, 1 validation or diagnostic failure, 2 usage/config
errors.  Given the same config and seed, file outputs are byte-identical
across runs, platforms and backend thread counts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import oracle
from .drift import gaussian_expectation, no_arbitrage_drift
from .esscher import RiskPremia, risk_neutralize
from .measure import expected_step_kernel, log_step_kernels
from .model import ModelParams, validate
from .pricing import martingale_check, price_european, write_price_csv
from .sim import SeedSpec, simulate_p, simulate_q, write_paths_csv

__all__ = ["RunConfig", "PricingConfig", "ConfigError", "load_config", "main"]


class ConfigError(Exception):
    """Config file missing, unreadable, malformed or schema-invalid."""


@dataclass(frozen=True)
class PricingConfig:
    payoff: str
    strike: float
    maturity_steps: int


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    premia: RiskPremia
    s0: float
    n_paths: int
    n_steps: int
    master_seed: int
    pricing: PricingConfig | None
    output_dir: Path


def _require(data: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in data:
        raise ConfigError(f"missing key {key!r} in {where}")
    return data[key]


def _parse_config(data: Mapping[str, Any]) -> RunConfig:
    try:
        model = ModelParams.from_mapping(_require(data, "model", "config"))
        premia = RiskPremia.from_mapping(_require(data, "premia", "config"))
        sim = _require(data, "sim", "config")
        s0 = float(sim.get("s0", 100.0))
        n_paths = int(_require(sim, "n_paths", "sim"))
        n_steps = int(_require(sim, "n_steps", "sim"))
        master_seed = int(_require(sim, "master_seed", "sim"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    pricing = None
    if "pricing" in data and data["pricing"] is not None:
        p = data["pricing"]
        try:
            pricing = PricingConfig(
                payoff=str(_require(p, "payoff", "pricing")),
                strike=float(_require(p, "strike", "pricing")),
                maturity_steps=int(_require(p, "maturity_steps", "pricing")),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad pricing section: {exc}") from exc
        if pricing.payoff not in ("call", "put"):
            raise ConfigError(f"pricing.payoff must be 'call' or 'put', got {pricing.payoff!r}")
        if pricing.maturity_steps < 1:
            raise ConfigError(f"pricing.maturity_steps must be >= 1, got {pricing.maturity_steps}")
    output_dir = Path(str(data.get("output_dir", ".")))
    return RunConfig(
        model=model, premia=premia, s0=s0,
        n_paths=n_paths, n_steps=n_steps, master_seed=master_seed,
        pricing=pricing, output_dir=output_dir,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must contain a JSON object")
    return _parse_config(data)


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    if getattr(args, "paths", None) is not None:
        if args.paths < 1:
            raise ConfigError(f"--paths must be >= 1, got {args.paths}")
        config = replace(config, n_paths=args.paths)
    if getattr(args, "seed", None) is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError(f"--seed must be a uint64, got {args.seed}")
        config = replace(config, master_seed=args.seed)
    if getattr(args, "output", None) is not None:
        config = replace(config, output_dir=Path(args.output))
    return config


def _validate_or_report(config: RunConfig) -> list[str]:
    problems = validate(config.model)
    for message in problems:
        print(f"invalid: {message}", file=sys.stderr)
    return problems


def cmd_validate(config: RunConfig, args: argparse.Namespace) -> int:
    problems = validate(config.model)
    if problems:
        for message in problems:
            print(f"invalid: {message}")
        return 1
    print("ok: model parameters satisfy all constraints")
    return 0


def cmd_drift(config: RunConfig, args: argparse.Namespace) -> int:
    if _validate_or_report(config):
        return 1
    report = no_arbitrage_drift(config.model, config.premia)
    if args.json:
        payload = {
            "mu": report.mu,
            "risk_free": report.risk_free,
            "diffusion_premium": report.diffusion_premium,
            "jump_adjustment": report.jump_adjustment,
            "expectation": report.expectation,
            "level_down": report.level_down,
            "level_up": report.level_up,
        }
        print(json.dumps(payload, sort_keys=True))
        return 0
    print(f"mu = {report.mu:.12g}")
    if args.decompose:
        print(f"  risk_free         = {report.risk_free:.12g}")
        print(f"  diffusion_premium = {report.diffusion_premium:.12g}")
        print(f"  jump_adjustment   = {report.jump_adjustment:.12g}")
        print(f"  expectation       = {report.expectation:.12g}")
        print(f"  level_down        = {report.level_down:.12g}")
        print(f"  level_up          = {report.level_up:.12g}")
    return 0


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    if _validate_or_report(config):
        return 1
    seeds = SeedSpec(config.master_seed)
    if args.measure == "p":
        batch = simulate_p(
            config.model, config.s0, config.n_steps, config.n_paths, seeds
        )
    else:
        batch = simulate_q(
            config.model, config.premia,
            s0=config.s0, n_steps=config.n_steps, n_paths=config.n_paths,
            seeds=seeds,
        )
    config.output_dir.mkdir(parents=True, exist_ok=True)
    out_path = config.output_dir / f"paths_{args.measure}.csv"
    with open(out_path, "w", newline="") as stream:
        write_paths_csv(batch, stream)
    print(f"wrote {batch.n_paths} paths x {batch.n_steps} steps to {out_path}")
    return 0


def cmd_price(config: RunConfig, args: argparse.Namespace) -> int:
    if config.pricing is None:
        print("error: config has no pricing section", file=sys.stderr)
        return 2
    if _validate_or_report(config):
        return 1
    result = price_european(
        config.model, config.premia, config.s0,
        config.pricing.payoff, config.pricing.strike,
        config.pricing.maturity_steps, config.n_paths,
        SeedSpec(config.master_seed),
    )
    config.output_dir.mkdir(parents=True, exist_ok=True)
    out_path = config.output_dir / "prices.csv"
    with open(out_path, "w", newline="") as stream:
        write_price_csv([result], stream)
    if args.json:
        payload = {
            "payoff": result.payoff,
            "strike": result.strike,
            "maturity": result.maturity,
            "price": result.price,
            "std_error": result.std_error,
            "n_paths": result.n_paths,
            "discount_factor": result.discount_factor,
            "mu_used": result.mu_used,
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(
            f"{result.payoff} strike={result.strike:g} maturity={result.maturity:g}: "
            f"price = {result.price:.6f} +/- {result.std_error:.6f} "
            f"(n_paths={result.n_paths}, wrote {out_path})"
        )
    return 0


def _rn_check_rows(config: RunConfig) -> list[dict[str, Any]]:
    params, premia = config.model, config.premia
    rn = risk_neutralize(params, premia)
    seeds = SeedSpec(config.master_seed)
    n = config.n_paths
    rows: list[dict[str, Any]] = []

    def det_row(name: str, value: float, target: float, tol: float) -> None:
        err = abs(value - target)
        rows.append({
            "check": name, "value": value, "target": target,
            "score": err, "kind": "abs_err", "ok": err < tol,
        })

    closed = expected_step_kernel(params, premia, rn)
    det_row("step_kernel_closed_form", closed, 1.0, 1e-10)
    quad = oracle.expect_step_kernel(params, premia)
    det_row("step_kernel_quadrature", quad.value, 1.0, 1e-8)
    mq_closed = gaussian_expectation(params, premia, rn)
    mq_quad = oracle.expect_mq(params, premia, rn)
    det_row("mq_closed_vs_quadrature", mq_quad.value, mq_closed, 1e-8)
    mu_star = no_arbitrage_drift(params, premia, rn).mu
    ret_quad = oracle.expect_q_return(params, premia, rn, mu=mu_star)
    det_row("q_return_quadrature", ret_quad.value, math.exp(params.r * params.tau), 1e-8)

    def z_row(name: str, value: float, target: float, std_error: float) -> None:
        z = (value - target) / std_error
        rows.append({
            "check": name, "value": value, "target": target,
            "score": z, "kind": "z", "ok": abs(z) <= 5.0,
        })

    batch = simulate_p(params, config.s0, config.n_steps, n, seeds)
    logk = log_step_kernels(
        batch.dw, batch.region, batch.jump_kind, batch.jump_size,
        params, premia, rn,
    )
    step_k = np.exp(logk[:, 0])
    z_row("step_kernel_mc_mean", float(step_k.mean()),
          1.0, float(step_k.std(ddof=1)) / math.sqrt(n))
    path_k = np.exp(logk.sum(axis=1))
    z_row("path_kernel_mc_mean", float(path_k.mean()),
          1.0, float(path_k.std(ddof=1)) / math.sqrt(n))

    dw = batch.dw[:, 0]
    shift_target = -premia.gamma_d * params.sigma * params.tau
    weighted = step_k * dw
    z_row("girsanov_mean", float(weighted.mean()),
          shift_target, float(weighted.std(ddof=1)) / math.sqrt(n))
    centered = step_k * (dw - shift_target) ** 2
    z_row("girsanov_var", float(centered.mean()),
          params.tau, float(centered.std(ddof=1)) / math.sqrt(n))

    report = martingale_check(params, premia, n, config.n_steps, seeds)
    worst = int(np.argmax(np.abs(report.z_scores)))
    z_row(f"martingale_step_{worst + 1}", float(report.means[worst]),
          1.0, float(report.std_errors[worst]))
    return rows


def cmd_rn_check(config: RunConfig, args: argparse.Namespace) -> int:
    if _validate_or_report(config):
        return 1
    rows = _rn_check_rows(config)
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        width = max(len(r["check"]) for r in rows)
        for r in rows:
            status = "ok" if r["ok"] else "FAIL"
            label = "|err|" if r["kind"] == "abs_err" else "z"
            print(
                f"{r['check']:<{width}}  value={r['value']: .10g}  "
                f"target={r['target']: .10g}  {label}={r['score']: .3g}  [{status}]"
            )
    return 0 if all(r["ok"] for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigjump",
        description="Threshold-triggered jump-diffusion: drift, simulation, pricing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override sim.master_seed")
        p.add_argument("--paths", type=int, default=None, help="override sim.n_paths")

    p_validate = sub.add_parser("validate", help="check model parameters")
    add_common(p_validate)
    p_validate.set_defaults(handler=cmd_validate)

    p_drift = sub.add_parser("drift", help="no-arbitrage drift")
    add_common(p_drift)
    p_drift.add_argument("--decompose", action="store_true", help="print the three drift components")
    p_drift.add_argument("--json", action="store_true", help="machine-readable output")
    p_drift.set_defaults(handler=cmd_drift)

    p_sim = sub.add_parser("simulate", help="simulate paths to CSV")
    add_common(p_sim)
    p_sim.add_argument("--measure", choices=("p", "q"), default="p", help="measure to simulate under")
    p_sim.add_argument("--output", default=None, help="output directory")
    p_sim.set_defaults(handler=cmd_simulate)

    p_price = sub.add_parser("price", help="price the configured European option")
    add_common(p_price)
    p_price.add_argument("--output", default=None, help="output directory")
    p_price.add_argument("--json", action="store_true", help="machine-readable output")
    p_price.set_defaults(handler=cmd_price)

    p_rn = sub.add_parser("rn-check", help="risk-neutrality diagnostics")
    add_common(p_rn)
    p_rn.add_argument("--json", action="store_true", help="machine-readable output")
    p_rn.set_defaults(handler=cmd_rn_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = _apply_overrides(config, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.handler(config, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
