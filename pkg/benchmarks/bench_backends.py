"""Time path simulation under each compute backend.

Usage: python benchmarks/bench_backends.py [--paths N ...] [--steps M]

Runs simulate_p for each requested path count under the numba backend and
the plain numpy backend and prints a timing table.  The first numba call
includes JIT compilation unless a disk cache is already warm; a throwaway
warmup run keeps that out of the measurements.
"""

from __future__ import annotations

import argparse
import os
import time

from trigjump import JumpLaw, ModelParams, RegionJumpSpec, SeedSpec, simulate_p

PARAMS = ModelParams(
    mu=0.08, sigma=0.2, r=0.03, tau=1.0 / 52.0, b_down=-1.8, b_up=2.0,
    region_down=RegionJumpSpec(
        p_up=0.25, p_down=0.55, p_none=0.20,
        law_up=JumpLaw(-0.02, 0.15), law_down=JumpLaw(-0.05, 0.2),
    ),
    region_up=RegionJumpSpec(
        p_up=0.5, p_down=0.3, p_none=0.2,
        law_up=JumpLaw(0.05, 0.1), law_down=JumpLaw(-0.03, 0.12),
    ),
)


def run(n_paths: int, n_steps: int, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        simulate_p(PARAMS, 100.0, n_steps, n_paths, SeedSpec(7))
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--paths", type=int, nargs="+",
                        default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--steps", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    results: dict[str, list[float]] = {}
    for backend in ("numba", "numpy"):
        os.environ["TRIGJUMP_BACKEND"] = backend
        run(1000, args.steps, 1)  # warmup: JIT compile / cache load
        results[backend] = [run(n, args.steps, args.repeats) for n in args.paths]

    print(f"{'n_paths':>10}  {'steps':>5}  {'numba (s)':>10}  {'numpy (s)':>10}  {'speedup':>7}")
    for i, n in enumerate(args.paths):
        nb, np_ = results["numba"][i], results["numpy"][i]
        print(f"{n:>10}  {args.steps:>5}  {nb:>10.4f}  {np_:>10.4f}  {np_ / nb:>6.2f}x")


if __name__ == "__main__":
    main()
