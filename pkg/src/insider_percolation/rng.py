"""Per-trial random streams.

Trial ``t`` of a run seeded with ``master`` always draws from
``PCG64(SeedSequence(master, spawn_key=(t,)))``, whatever order or thread the
trial runs in.
"""

import os

import numpy as np

from .errors import ValidationError

MAX_SEED = 2**64 - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return int(seed)


def trial_seed(master: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master), spawn_key=(int(trial),))


def trial_rng(master: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trial_seed(master, trial)))


def resolve_threads(threads: int) -> int:
    """0 means one worker per CPU."""
    if threads < 0:
        raise ValidationError(f"threads must be >= 0, got {threads!r}")
    return threads or (os.cpu_count() or 1)
