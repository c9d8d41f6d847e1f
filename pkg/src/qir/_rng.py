"""Reproducible random streams.

Every stochastic routine in the package draws from a Philox counter-based
generator keyed by ``(seed, *path)``. Trials, restarts, and the roles
inside a trial each get their own path, so any sample can be regenerated
in isolation and parallel execution is bitwise-stable for a fixed seed.
"""

from collections.abc import Sequence
from typing import Union

import numpy as np

Seed = Union[int, Sequence[int]]


def spawn_rng(seed: Seed, *path: int) -> np.random.Generator:
    """Generator for the stream identified by ``seed`` and a role path."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
