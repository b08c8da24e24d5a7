"""Counter-based random numbers.

Every draw is a pure function of ``(seed, tags..., counter)``: a stream key is
hashed from the seed and tags, and the ``i``-th value is the splitmix64
finalizer applied to ``key + (i + 1) * golden``. Nothing is stateful, so the
values a trial sees do not depend on which thread produced them or in which
order.
"""
from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def stream_key(seed: int, *tags) -> int:
    if not 0 <= int(seed) <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    text = "|".join([str(int(seed))] + [str(t) for t in tags]).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def raw64(key: int, counters) -> np.ndarray:
    c = np.asarray(counters, dtype=np.uint64)
    return mix64(np.uint64(key) + (c + np.uint64(1)) * _GOLDEN)


def uniforms(key: int, counters) -> np.ndarray:
    """Doubles in ``[0, 1)`` with 53 random bits each."""
    return (raw64(key, counters) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def uniform_block(seed: int, tags: tuple, start: int, stop: int) -> np.ndarray:
    return uniforms(stream_key(seed, *tags), np.arange(start, stop, dtype=np.uint64))
