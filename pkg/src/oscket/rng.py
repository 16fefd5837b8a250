"""Counter-based SplitMix64 streams.

Every random number in the package comes from this module, so that a
seed reproduces the same outcomes on any platform and numpy version.

Algorithm (Steele, Lea & Flood 2014, "Fast splittable pseudorandom number
generators"; also the seeding generator of xoshiro):

    state_i = key + (i + 1) * 0x9E3779B97F4A7C15          (mod 2**64)
    z = (state_i ^ (state_i >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out_i = z ^ (z >> 31)

Output ``i`` depends only on ``(key, i)``, so any index is reachable
without generating its predecessors. Floats are ``(out_i >> 11) * 2**-53``
and lie in ``[0, 1)``.

Seed derivation for batch ``i`` of a master seed is
``derive_seed(master, i) = out_i(key=master)``.
"""

from __future__ import annotations

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
_TO_UNIT = 2.0**-53


def _as_key(seed: int) -> np.uint64:
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    return np.uint64(seed & _MASK64)


def splitmix64(key: int, indices) -> np.ndarray:
    """Raw 64-bit outputs of stream ``key`` at the given counter indices."""
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (idx + np.uint64(1)) * GAMMA + _as_key(key)
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniform_at(key: int, indices) -> np.ndarray:
    """Floats in [0, 1) at the given counter indices of stream ``key``."""
    raw = splitmix64(key, indices)
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def derive_seed(master: int, index: int) -> int:
    """Key of child stream ``index`` of ``master``."""
    return int(splitmix64(master, np.array([index]))[0])


class Stream:
    """Sequential reader over one SplitMix64 stream.

    The reader position is the only mutable state; two readers built from
    the same key return identical sequences.
    """

    def __init__(self, key: int, position: int = 0):
        self.key = int(_as_key(key))
        self.position = int(position)

    def random(self, size: int | None = None):
        if size is None:
            return float(self.random(1)[0])
        size = int(size)
        out = uniform_at(self.key, np.arange(self.position, self.position + size, dtype=np.uint64))
        self.position += size
        return out

    def child(self, index: int) -> "Stream":
        return Stream(derive_seed(self.key, index))

    def __repr__(self) -> str:
        return f"Stream(key={self.key:#x}, position={self.position})"
