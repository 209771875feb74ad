"""Deterministic pseudo-random machinery for the synthetic generators.

splitmix64 expands a 64-bit seed into the xoshiro256** state, and all
sampling (uniform integers, Zipf ranks) is built on top of the raw 64-bit
stream.  This keeps every generated artifact byte-identical across runs and
platforms, which the stdlib RNG does not promise across versions.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int):
    state &= _MASK64

    def nxt() -> int:
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    return nxt


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 seed expansion."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        mix = _splitmix64(seed)
        self.s0 = mix()
        self.s1 = mix()
        self.s2 = mix()
        self.s3 = mix()

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection on the top of the 64-bit stream."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        threshold = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < threshold:
                return x % n

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


class ZipfSampler:
    """Inverse-CDF sampling of ranks 1..n with probability proportional to rank^-s."""

    def __init__(self, n: int, exponent: float):
        if n < 1:
            raise ValueError("need at least one rank")
        weights = [r ** (-float(exponent)) for r in range(1, n + 1)]
        total = math.fsum(weights)
        self.probabilities = [w / total for w in weights]
        cdf = []
        acc = 0.0
        for p in self.probabilities:
            acc += p
            cdf.append(acc)
        cdf[-1] = 1.0
        self._cdf = cdf

    def sample(self, rng: Xoshiro256StarStar) -> int:
        """Draw a rank in 1..n."""
        u = rng.random()
        cdf = self._cdf
        lo, hi = 0, len(cdf) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cdf[mid] > u:
                hi = mid
            else:
                lo = mid + 1
        return lo + 1
