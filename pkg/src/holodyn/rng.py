"""Counter-based deterministic randomness (splitmix64).

Sample i of stream s under seed k is a pure function of (k, s, i), so
Monte Carlo results are independent of chunking, execution order and
thread count.
"""

from __future__ import annotations

import numpy as np

__all__ = ["uniform01", "randint"]

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(x: np.ndarray) -> np.ndarray:
    x = (x + _GAMMA) & _MASK
    x = ((x ^ (x >> np.uint64(30))) * _M1) & _MASK
    x = ((x ^ (x >> np.uint64(27))) * _M2) & _MASK
    return x ^ (x >> np.uint64(31))


def _words(seed: int, index, stream: int) -> np.ndarray:
    idx = np.asarray(index, dtype=np.uint64)
    base = np.uint64((seed * 0x632BE59BD9B4E019 + stream * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
    return _mix(_mix(idx) ^ base)


def uniform01(seed: int, index, stream: int = 0) -> np.ndarray:
    """Uniform floats in [0, 1); vectorized over `index`."""
    w = _words(seed, index, stream)
    return (w >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def randint(seed: int, index, bound: int, stream: int = 0):
    """Uniform integers in [0, bound); vectorized over `index`."""
    w = _words(seed, index, stream)
    return (w % np.uint64(bound)).astype(np.int64)
