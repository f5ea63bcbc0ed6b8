"""Seed derivation shared by every resampling routine.

All randomness flows from numpy's PCG64 bit generator. Child streams are derived
with ``numpy.random.SeedSequence(master, spawn_key=keys)``, i.e. the SeedSequence
hash of the master seed and an integer key path, so replicate ``b`` gets the same
stream no matter which worker runs it or in what order.
"""

from __future__ import annotations

import numpy as np


def derive_seed(master: int, *keys: int) -> int:
    """64-bit seed for the stream identified by ``(master, *keys)``."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def generator(seed: int, *keys: int) -> np.random.Generator:
    if keys:
        seed = derive_seed(seed, *keys)
    return np.random.Generator(np.random.PCG64(int(seed)))
