"""Counter-based randomness.

Every random decision is a pure function of ``(seed, key...)`` so results do
not depend on iteration order or on how work is split across threads.
"""
import hashlib

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _splitmix(x):
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


def keyed_bits(seed, *keys):
    """64-bit hash of ``seed`` combined with each key array (broadcast)."""
    with np.errstate(over="ignore"):
        h = _splitmix(np.uint64(int(seed) & _MASK64))
        for key in keys:
            k = np.asarray(key).astype(np.uint64)
            h = _splitmix(h ^ _splitmix(k))
    return h


def keyed_uniform(seed, *keys):
    """Uniform floats in [0, 1) keyed by ``(seed, keys...)``; never returns 1."""
    h = keyed_bits(seed, *keys)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def derive_seed(master, stage, index=0):
    """Derive a 64-bit stream seed from a master seed, a stage name and an index."""
    data = f"{int(master)}/{stage}/{int(index)}".encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")
