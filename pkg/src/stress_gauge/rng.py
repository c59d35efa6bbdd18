"""Portable deterministic random numbers.

Every seeded surface in this package (synthetic datasets, random embeddings,
embedder initialization) draws from xoshiro256** seeded through splitmix64,
with doubles taken as ``(word >> 11) * 2**-53`` and normals from the basic
Box-Muller transform (two uniforms per pair, pairs consumed eagerly). The
algorithm is pinned here, rather than delegated to a library default, so that
identical seeds reproduce identical streams on any platform or language.

Reference: https://prng.di.unimi.it/ (public-domain algorithms).
"""

from __future__ import annotations

import hashlib
import math

import numpy as np

__all__ = ["Xoshiro256StarStar", "derive_seed"]

_MASK64 = (1 << 64) - 1
_DOUBLE_UNIT = 2.0**-53


def _splitmix64(state: int):
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)), state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** stream, state filled from the seed via splitmix64."""

    def __init__(self, seed: int):
        state = int(seed) & _MASK64
        s = []
        for _ in range(4):
            word, state = _splitmix64(state)
            s.append(word)
        self._s = s

    def next_uint64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_uint64() >> 11) * _DOUBLE_UNIT

    def uniforms(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """n uniform doubles in [low, high)."""
        out = np.empty(n, dtype=float)
        span = high - low
        for i in range(n):
            out[i] = low + span * self.random()
        return out

    def normals(self, n: int, scale: float = 1.0) -> np.ndarray:
        """n standard normals times ``scale``, via Box-Muller.

        Consumes exactly 2 * ceil(n / 2) uniforms; the first uniform of each
        pair is shifted into (0, 1] so the logarithm is always defined.
        """
        out = np.empty(n, dtype=float)
        i = 0
        while i < n:
            u1 = ((self.next_uint64() >> 11) + 1) * _DOUBLE_UNIT
            u2 = (self.next_uint64() >> 11) * _DOUBLE_UNIT
            r = math.sqrt(-2.0 * math.log(u1))
            theta = 2.0 * math.pi * u2
            out[i] = r * math.cos(theta)
            i += 1
            if i < n:
                out[i] = r * math.sin(theta)
                i += 1
        if scale != 1.0:
            out *= scale
        return out

    def normal_matrix(self, rows: int, cols: int, scale: float = 1.0) -> np.ndarray:
        """rows x cols normals in row-major draw order."""
        return self.normals(rows * cols, scale=scale).reshape(rows, cols)

    def uniform_matrix(
        self, rows: int, cols: int, low: float = 0.0, high: float = 1.0
    ) -> np.ndarray:
        """rows x cols uniforms in row-major draw order."""
        return self.uniforms(rows * cols, low=low, high=high).reshape(rows, cols)


def derive_seed(base_seed: int, *parts) -> int:
    """Stable per-job seed: base seed XOR a keyed hash of the job identity.

    Uses blake2b rather than the interpreter's salted ``hash`` so the same
    (dataset, run, technique) tuple maps to the same seed in every process.
    """
    tag = "|".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(tag, digest_size=8).digest()
    return (int(base_seed) ^ int.from_bytes(digest, "little")) & _MASK64
