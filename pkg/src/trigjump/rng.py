"""Counter-based uniform streams with a fixed per-(path, step) layout.

Each path owns a contiguous block of the Philox counter keyed by the master
seed, so any chunking of the path range reproduces the same draws and the
same seed yields the same batch on every run.  Every step consumes exactly
three uniform slots regardless of outcome:

    slot 0: diffusion increment (via the normal quantile),
    slot 1: jump-kind selector,
    slot 2: jump-size draw (via the normal quantile).

Philox emits four 64-bit words per counter tick, so per-path blocks are
padded up to a multiple of four draws; the pad slots are never consumed.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

from ._normal import ppf

__all__ = ["DRAWS_PER_STEP", "draws_per_path", "path_uniforms", "gaussian_from_uniform"]

DRAWS_PER_STEP = 3

# Generator.random() can return exactly 0.0 (probability 2**-53 per draw);
# the quantile there is -inf, so floor uniforms half a ulp above zero.
_MIN_UNIFORM = 2.0 ** -54

_DOUBLES_PER_COUNTER_TICK = 4


def draws_per_path(n_steps: int) -> int:
    """Padded block size: 3 draws per step, rounded up to a multiple of 4."""
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    raw = DRAWS_PER_STEP * n_steps
    ticks = -(-raw // _DOUBLES_PER_COUNTER_TICK)
    return ticks * _DOUBLES_PER_COUNTER_TICK


def path_uniforms(master_seed: int, path_lo: int, path_hi: int, n_steps: int) -> np.ndarray:
    """Uniforms for paths [path_lo, path_hi), shaped (count, n_steps, 3).

    Pure function of (master_seed, path index, step index): independent of
    how the path range is chunked across calls.
    """
    if not 0 <= master_seed < 2 ** 64:
        raise ValueError(f"master_seed must be a uint64, got {master_seed!r}")
    if not 0 <= path_lo <= path_hi:
        raise ValueError(f"invalid path range [{path_lo}, {path_hi})")
    block = draws_per_path(n_steps)
    bitgen = Philox(key=master_seed)
    bitgen.advance(path_lo * (block // _DOUBLES_PER_COUNTER_TICK))
    count = path_hi - path_lo
    u = Generator(bitgen).random(count * block)
    u = u.reshape(count, block)[:, : DRAWS_PER_STEP * n_steps]
    return np.ascontiguousarray(u.reshape(count, n_steps, DRAWS_PER_STEP))


def gaussian_from_uniform(u: np.ndarray) -> np.ndarray:
    """Standard normals by inverse transform; keeps streams comparable
    across measures because the same uniform maps to the same quantile."""
    return ppf(np.maximum(u, _MIN_UNIFORM))
