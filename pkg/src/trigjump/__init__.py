"""Threshold-triggered jump-diffusion with an Esscher-Girsanov pricing measure.

Jumps fire only when the contemporaneous diffusion increment crosses one of
two thresholds, so jump risk is driven by the same shock as diffusion risk.
The package provides the change of measure for that structure, the closed
form no-arbitrage drift, direct simulators under both measures, Monte Carlo
pricing, and quadrature oracles that re-derive every closed form numerically.
"""

from .drift import (
    CalibrationResult,
    DriftReport,
    NoRootInBracket,
    calibrate_gamma,
    conditional_mgf,
    gaussian_expectation,
    no_arbitrage_drift,
)
from .esscher import RiskNeutralSpec, RiskPremia, cgf, normalizer, risk_neutralize
from .measure import (
    JumpKind,
    StepOutcome,
    conditional_jump_kernel_mean,
    diffusion_kernel,
    expected_step_kernel,
    jump_kernel,
    log_step_kernels,
    path_kernel,
    step_kernel,
)
from .model import (
    JumpLaw,
    ModelParams,
    Region,
    RegionJumpSpec,
    classify_region,
    validate,
)
from .oracle import (
    GridRefinementError,
    GridSpec,
    QuadResult,
    expect_mq,
    expect_q_return,
    expect_step_kernel,
)
from .pricing import (
    MartingaleReport,
    PricingResult,
    black_scholes_reference,
    martingale_check,
    price_european,
    write_price_csv,
)
from .sim import Path, PathBatch, SeedSpec, simulate_p, simulate_q, write_paths_csv

__version__ = "0.1.0"

__all__ = [
    "CalibrationResult",
    "DriftReport",
    "GridRefinementError",
    "GridSpec",
    "JumpKind",
    "JumpLaw",
    "MartingaleReport",
    "ModelParams",
    "NoRootInBracket",
    "Path",
    "PathBatch",
    "PricingResult",
    "QuadResult",
    "Region",
    "RegionJumpSpec",
    "RiskNeutralSpec",
    "RiskPremia",
    "SeedSpec",
    "StepOutcome",
    "black_scholes_reference",
    "calibrate_gamma",
    "cgf",
    "classify_region",
    "conditional_jump_kernel_mean",
    "conditional_mgf",
    "diffusion_kernel",
    "expect_mq",
    "expect_q_return",
    "expect_step_kernel",
    "expected_step_kernel",
    "gaussian_expectation",
    "jump_kernel",
    "log_step_kernels",
    "martingale_check",
    "no_arbitrage_drift",
    "normalizer",
    "path_kernel",
    "price_european",
    "risk_neutralize",
    "simulate_p",
    "simulate_q",
    "step_kernel",
    "validate",
    "write_paths_csv",
    "write_price_csv",
]
