"""
Deterministic pseudo-random generator with a pinned, portable algorithm.

The generator is specified bit-exactly so that seeded runs reproduce across
machines and builds, independent of any library's RNG internals:

- State seeding: SplitMix64. Starting from the 64-bit seed, state advances
  by the golden-gamma constant 0x9E3779B97F4A7C15 and each output is the
  finalizer ``z ^= z>>30, z *= 0xBF58476D1CE4E5B9, z ^= z>>27,
  z *= 0x94D049BB133111EB, z ^= z>>31`` (all mod 2^64). Four successive
  outputs form the xoshiro state; an all-zero state cannot occur.
- Stream: xoshiro256**. Output is ``rotl(s1 * 5, 7) * 9``; the state update
  is ``t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t;
  s3 = rotl(s3, 45)``.
- Uniforms in [0, 1): the top 53 bits, ``(u64 >> 11) * 2^-53``.
- Normals: basic Box-Muller on uniform pairs (u1, u2):
  ``r = sqrt(-2 ln(1 - u1))``, ``z1 = r cos(2 pi u2)``,
  ``z2 = r sin(2 pi u2)``; z2 is cached and returned by the next call.
- Bounded integers: rejection sampling on ``u64 % n`` (draws above the
  largest multiple of n below 2^64 are discarded), so there is no modulo
  bias.

``normals()`` / ``uniforms()`` produce the same uniform stream in bulk with
the transform vectorized; trigonometric rounding may differ from the scalar
path in the last ulp, so bulk output is for statistics, not for replaying a
scalar-path simulation.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_U53 = 2.0 ** -53
_TWO_PI = 2.0 * math.pi


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (next_state, output)."""
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class Rng:
    """Seeded xoshiro256** stream with Box-Muller normal draws."""

    __slots__ = ("seed", "_s0", "_s1", "_s2", "_s3", "_cached_normal")

    def __init__(self, seed: int):
        if not 0 <= seed < (1 << 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer (got {seed})")
        self.seed = seed
        state = seed
        state, self._s0 = splitmix64(state)
        state, self._s1 = splitmix64(state)
        state, self._s2 = splitmix64(state)
        state, self._s3 = splitmix64(state)
        self._cached_normal: float | None = None

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        x = (s1 * 5) & _MASK
        result = ((((x << 7) | (x >> 57)) & _MASK) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * _U53

    def normal(self) -> float:
        """Standard normal draw; Box-Muller pairs, second value cached."""
        z = self._cached_normal
        if z is not None:
            self._cached_normal = None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        self._cached_normal = r * math.sin(_TWO_PI * u2)
        return r * math.cos(_TWO_PI * u2)

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError(f"n must be positive (got {n})")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def sample_indices(self, population: int, k: int) -> list[int]:
        """k distinct indices from range(population), partial Fisher-Yates.

        Index i swaps with a uniform position in [i, population); the first
        k pool entries are returned in draw order.
        """
        if k > population:
            raise ValueError(f"cannot sample {k} distinct indices from {population}")
        pool = list(range(population))
        for i in range(k):
            j = i + self.randbelow(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    # Bulk paths: same u64 stream, numpy-vectorized transforms.

    def u64_array(self, n: int) -> np.ndarray:
        """Next n raw outputs as a uint64 array (advances the stream)."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        out = [0] * n
        for i in range(n):
            x = (s1 * 5) & _MASK
            out[i] = ((((x << 7) | (x >> 57)) & _MASK) * 9) & _MASK
            t = (s1 << 17) & _MASK
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & _MASK
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return np.array(out, dtype=np.uint64)

    def uniforms(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1) as a float64 array."""
        return (self.u64_array(n) >> np.uint64(11)) * _U53

    def normals(self, n: int) -> np.ndarray:
        """n standard normals; consumes ceil(n/2)*2 uniforms pairwise."""
        pairs = (n + 1) // 2
        u = self.uniforms(2 * pairs)
        u1 = u[0::2]
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(1.0 - u1))
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(_TWO_PI * u2)
        z[1::2] = r * np.sin(_TWO_PI * u2)
        return z[:n]
