"""Deterministic seed derivation.

All random streams in the package are derived from a single 64-bit master
seed by absorbing integer tags (syndrome index, class index, purpose tag)
into a splitmix64 state. The derivation is a pure function, so worker
count and scheduling never change which stream a given task sees.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1

# purpose tags, spaced arbitrarily so unrelated streams never collide
TAG_SAMPLE_CHAIN = 0x01
TAG_INITIAL_CHAIN = 0x02
TAG_METROPOLIS = 0x03
TAG_PT = 0x04
TAG_WEIGHTED_CHAIN = 0x05
TAG_SCRAMBLE = 0x06


def mix64(z: int) -> int:
    """splitmix64 finalizer: a fixed 64-bit bijective mixing function."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; return (new_state, output word)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    return state, mix64(state)


def derive_seed(master: int, *tags: int) -> int:
    """Derive a 64-bit sub-seed from a master seed and integer tags.

    Each tag is xored in and the state re-mixed, so (master, tags) maps
    injectively (up to hashing) onto sub-seeds.
    """
    state = master & _MASK
    _, out = splitmix64(state)
    for tag in tags:
        state = (out ^ (tag & _MASK)) & _MASK
        _, out = splitmix64(state)
    return out


def generator(seed: int) -> np.random.Generator:
    """NumPy generator for a derived seed (PCG64, fixed choice)."""
    return np.random.Generator(np.random.PCG64(seed & _MASK))
