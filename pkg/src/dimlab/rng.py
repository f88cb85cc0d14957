"""SplitMix64: a counter-based 64-bit generator with fixed public constants.

Output ``i`` for seed ``s`` is ``mix(s + (i + 1) * GAMMA mod 2**64)``, so any draw can
be recomputed independently of the others.
"""

from __future__ import annotations

GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def splitmix64(seed: int, counter: int) -> int:
    """The ``counter``-th 64-bit output of the stream keyed by ``seed``."""
    return mix64(seed + (counter + 1) * GAMMA)


class SplitMix64:
    """Sequential view over the counter-based stream."""

    def __init__(self, seed: int):
        self.seed = seed & MASK
        self.counter = 0

    def next_u64(self) -> int:
        out = splitmix64(self.seed, self.counter)
        self.counter += 1
        return out

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection, so there is no modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def signs(self, n: int) -> tuple[int, ...]:
        """``n`` independent signs, 64 per draw, least significant bit first."""
        out = []
        while len(out) < n:
            word = self.next_u64()
            for b in range(min(64, n - len(out))):
                out.append(1 if (word >> b) & 1 else -1)
        return tuple(out)
