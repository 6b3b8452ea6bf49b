"""Portable deterministic random numbers.

Scalar draws come from a xoshiro256** generator seeded through splitmix64,
so the same 64-bit seed yields the same draw sequence on every platform.
Bulk fields (noise images, per-pixel drop masks) use a counter-based
splitmix64 stream keyed by a seed pulled from the owning generator, which
lets numpy produce the whole field in one shot without changing the
scalar stream.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtri, betaincinv

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One output of the splitmix64 mixing function for input state x."""
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_item_seed(global_seed: int, index: int) -> int:
    """Per-item seed: splitmix64 of the global seed XOR a golden-ratio-mixed index.

    Decouples determinism from processing order and worker count.
    """
    mixed = (int(index) * _GOLDEN) & _MASK
    return splitmix64((int(global_seed) & _MASK) ^ mixed)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Rng:
    """xoshiro256** with splitmix64 seeding. Single-owner, never shared."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        sm = int(seed) & _MASK
        s = []
        for _ in range(4):
            sm = (sm + _GOLDEN) & _MASK
            z = ((sm ^ (sm >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            s.append(z ^ (z >> 31))
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Uniform in [0, 1), 53-bit resolution."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform_open(self) -> float:
        """Uniform in (0, 1); safe for inverse-CDF transforms."""
        return ((self.next_u64() >> 11) + 0.5) * (2.0 ** -53)

    def uniform_range(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def randrange(self, n: int) -> int:
        """Integer in {0, ..., n-1}. Modulo bias is < n/2^64, negligible here."""
        if n <= 0:
            raise ValueError(f"randrange needs n >= 1, got {n}")
        return self.next_u64() % n

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        return mean + std * float(ndtri(self.uniform_open()))

    def beta(self, a: float, b: float) -> float:
        return float(betaincinv(a, b, self.uniform_open()))


def bulk_uniforms(seed: int, n: int) -> np.ndarray:
    """n uniforms in [0, 1) from the counter-based splitmix64 stream at `seed`."""
    idx = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + idx * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def bulk_normals(seed: int, n: int) -> np.ndarray:
    """n standard normals via inverse CDF of the bulk uniform stream."""
    # shift off exact zero so ndtri stays finite
    u = bulk_uniforms(seed, n) + 2.0 ** -54
    return ndtri(u)
