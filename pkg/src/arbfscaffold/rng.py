"""Small deterministic RNG used by the mesh perturbation.

SplitMix64 with the usual finalizer constants, plus Box-Muller on top for
Gaussian draws.  Everything is plain 64-bit integer arithmetic followed by
IEEE double ops, so streams are reproducible bit-for-bit for a given seed,
independent of numpy's global state.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream; state advances by the 64-bit golden ratio."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        # 53 high bits -> uniform double in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


class GaussianStream:
    """Standard normal draws via Box-Muller over a SplitMix64 stream."""

    def __init__(self, seed: int):
        self._rng = SplitMix64(seed)
        self._spare = None

    def next_gauss(self) -> float:
        if self._spare is not None:
            g, self._spare = self._spare, None
            return g
        # u1 in (0, 1] keeps the log finite
        u1 = ((self._rng.next_u64() >> 11) + 1) * 2.0**-53
        u2 = self._rng.next_float()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def unit_vector(self, dim: int = 3) -> tuple[float, float, float]:
        """Uniform random unit vector; z = 0 when dim == 2."""
        while True:
            gx = self.next_gauss()
            gy = self.next_gauss()
            gz = self.next_gauss() if dim == 3 else 0.0
            norm = math.sqrt(gx * gx + gy * gy + gz * gz)
            if norm > 1e-12:
                return gx / norm, gy / norm, gz / norm
