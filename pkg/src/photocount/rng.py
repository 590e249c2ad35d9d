"""Counter-based SplitMix64 random streams.

Every uniform variate is a pure function of ``(key, counter)``::

    u(key, c) = (mix64(key + (c + 1) * GOLDEN) >> 11) * 2**-53

so any draw can be generated independently of all others. Simulations
split their trials into fixed-size blocks and derive one key per block
with :func:`block_key`; the result of a run therefore does not depend on
how blocks are distributed over workers.

The splitting rule is part of the external contract::

    k0  = mix64(seed)
    k1  = mix64(k0 + (stream + 1) * GOLDEN)
    key = mix64(k1 + (block + 1) * GOLDEN)

with all arithmetic modulo 2**64.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def block_key(seed: int, stream: int, block: int) -> int:
    """Key of block ``block`` of substream ``stream`` under master ``seed``."""
    k0 = mix64(check_seed(seed))
    k1 = mix64(k0 + (stream + 1) * GOLDEN)
    return mix64(k1 + (block + 1) * GOLDEN)


def uniform_at(key: int, counter: int) -> float:
    return (mix64(key + (counter + 1) * GOLDEN) >> 11) * _INV53


def uniforms_at(key: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized :func:`uniform_at` over an array of counters."""
    c = np.asarray(counters, dtype=np.uint64)
    z = np.uint64(key) + (c + np.uint64(1)) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


class CounterStream:
    """Sequential view of one counter-based stream.

    >>> s = CounterStream(seed=7)
    >>> a = s.uniform(); b = s.uniform()
    >>> CounterStream(seed=7).uniforms(2).tolist() == [a, b]
    True
    """

    def __init__(self, seed: int, stream: int = 0, block: int = 0):
        self.key = block_key(seed, stream, block)
        self.counter = 0

    def uniform(self) -> float:
        u = uniform_at(self.key, self.counter)
        self.counter += 1
        return u

    def uniforms(self, size: int) -> np.ndarray:
        out = uniforms_at(self.key, np.arange(self.counter, self.counter + size, dtype=np.uint64))
        self.counter += size
        return out
