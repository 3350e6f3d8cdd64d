"""Counter-based random streams derived from one master seed.

Every Monte-Carlo cell (a grid phase, an optimizer restart) draws from its own
Philox stream keyed by ``(master_seed, *cell_key)``.  A cell's numbers never
depend on which other cells ran or in what order, so serial and parallel
execution give bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np

SEED_ENV_VAR = "HLPHASE_SEED"
DEFAULT_SEED = 20180125


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def cell_generator(master_seed: int, *cell_key: int) -> np.random.Generator:
    if master_seed < 0 or master_seed >= 2**64:
        raise ValueError("master seed must be a 64-bit unsigned integer")
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in cell_key))
    return np.random.Generator(np.random.Philox(seq))
