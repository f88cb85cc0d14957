"""Counting helpers: g_M, exact Khintchine means and sign-pattern enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import CapExceeded, Path, path_from_index, path_index

SIGN_PATTERN_CAP = 25
KHINTCHINE_MAX_K = 30


def g_M(n: int, d: int, M: int) -> int:
    """``sum_{i<=d} C(n, i) (M-1)^i`` as an exact integer."""
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    if M < 2:
        raise ValueError("M must be at least 2")
    return sum(math.comb(n, i) * (M - 1) ** i for i in range(min(n, d) + 1))


def khintchine_abs_mean(k: int) -> Fraction:
    """``E |(1/k) sum_{i<=k} eps_i|`` for Rademacher signs, exactly."""
    if not 1 <= k <= KHINTCHINE_MAX_K:
        raise ValueError(f"k must lie in 1..{KHINTCHINE_MAX_K}")
    total = sum(math.comb(k, j) * abs(2 * j - k) for j in range(k + 1))
    return Fraction(total, k * 2**k)


def sign_patterns(d: int, cap: int = SIGN_PATTERN_CAP) -> Iterator[Path]:
    """All ``2**d`` sign vectors in index order (first sign most significant, -1 before +1)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d > cap:
        raise CapExceeded(f"d = {d} exceeds the sign-pattern cap {cap}")
    for idx in range(1 << d):
        yield path_from_index(idx, d)


@dataclass(frozen=True)
class SignPatternSet:
    """A subset of ``{-1, +1}^d`` as a ``2**d``-bit integer mask."""

    d: int
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> (1 << self.d):
            raise ValueError("mask has bits outside the 2**d pattern range")

    @classmethod
    def full(cls, d: int) -> SignPatternSet:
        return cls(d, (1 << (1 << d)) - 1)

    def add(self, path) -> SignPatternSet:
        return SignPatternSet(self.d, self.mask | (1 << path_index(path)))

    def __contains__(self, path) -> bool:
        return bool(self.mask >> path_index(path) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def is_full(self) -> bool:
        return len(self) == 1 << self.d

    def missing(self) -> list[Path]:
        return [p for i, p in enumerate(sign_patterns(self.d)) if not self.mask >> i & 1]
