"""Keyed, platform-stable random number generation.

Every stochastic stage derives an independent PCG64 stream from the master
seed plus string keys (typically a stage name and a sample id). Streams are
pure functions of (seed, keys): sample order, parallelism, and Python's
salted hash() cannot change any outcome.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEED_MIN = -(2**63)
_SEED_MAX = 2**64 - 1


def _digest(seed: int, parts: tuple[str, ...]) -> bytes:
    if not (_SEED_MIN <= seed <= _SEED_MAX):
        raise ValueError(f"seed {seed} does not fit in 64 bits")
    h = hashlib.blake2b(digest_size=16)
    h.update(seed.to_bytes(9, "little", signed=True))
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.digest()


def keyed_rng(seed: int, *parts: str) -> np.random.Generator:
    """Return a PCG64 generator keyed by (seed, *parts)."""
    return np.random.default_rng(int.from_bytes(_digest(seed, parts), "little"))


def keyed_u64(seed: int, *parts: str) -> int:
    """Stable 64-bit priority for (seed, *parts); used for seeded ordering."""
    return int.from_bytes(_digest(seed, parts)[:8], "little")
