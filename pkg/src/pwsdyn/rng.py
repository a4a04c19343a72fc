"""Counter-based splitmix64 random streams.

Every stochastic choice in the package (initial conditions, parameter
samples, shuffles, weight init, dropout masks) is drawn from a ``Stream``.
Streams are counter-based: draw k of ``Stream(seed, index)`` is

    mix64(mix64(mix64(seed) + GOLDEN*(index+1)) + GOLDEN*(k+1))

so the same (seed, index, k) triple yields the same value on any platform,
in any draw order, and regardless of how work is chunked across workers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV53 = 2.0**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer (Stafford variant 13)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


class Stream:
    """One independent random stream, addressed by (seed, index)."""

    __slots__ = ("_base", "_counter")

    def __init__(self, seed: int, index: int = 0):
        self._base = mix64((mix64(seed & _MASK64) + _GOLDEN * ((index + 1) & _MASK64)) & _MASK64)
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return mix64((self._base + _GOLDEN * self._counter) & _MASK64)

    def u64_block(self, n: int) -> np.ndarray:
        ks = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            states = np.uint64(self._base) + np.uint64(_GOLDEN) * ks
        return _mix64_vec(states)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.next_u64() >> 11) * _INV53)

    def uniform_block(self, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        u01 = (self.u64_block(n) >> np.uint64(11)).astype(np.float64) * _INV53
        return lo + (hi - lo) * u01

    def normal_block(self, n: int) -> np.ndarray:
        """Standard normals via Box-Muller, two per uniform pair."""
        half = (n + 1) // 2
        u1 = np.maximum(self.uniform_block(half), _INV53)
        u2 = self.uniform_block(half)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])
        return z[:n]

    def randint_below(self, n: int) -> int:
        """Integer in [0, n). Uses the 53-bit uniform, so u < 1 strictly."""
        return int(self.uniform() * n)

    def shuffle_indices(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n)."""
        idx = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.randint_below(i + 1)
            idx[i], idx[j] = idx[j], idx[i]
        return idx

    def bootstrap_indices(self, n: int) -> np.ndarray:
        u = self.uniform_block(n)
        return np.minimum((u * n).astype(np.int64), n - 1)
