"""Exact minimum l_inf covers and maximum packings of a finite class on a sample design."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import REAL_GRID, CapExceeded, FunctionClass, Metric, as_fraction, format_fraction

COVER_EXACT_CAP = 20
PACKING_EXACT_CAP = 25


@dataclass(frozen=True)
class CoverSet:
    """Centers as numerator vectors over the class grid, and the center used by each function."""

    centers: tuple[tuple[int, ...], ...]
    assignment: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.centers)

    def to_json(self, Q: int) -> dict:
        return {
            "size": len(self.centers),
            "centers": [[format_fraction(Fraction(v, Q)) for v in c] for c in self.centers],
            "assignment": list(self.assignment),
        }


def _validate(cls: FunctionClass, design: Sequence[int], alpha, metric: Metric | None = None) -> Fraction:
    for x in design:
        if not 0 <= x < cls.n_points:
            raise IndexError(f"design index {x} out of range")
    a = as_fraction(alpha)
    if a < 0:
        raise ValueError("alpha must be nonnegative")
    if cls.grid.kind == REAL_GRID and (metric is None or metric.is_absolute):
        cls.grid.numerator(a, what="alpha")
    return a


class _Geometry:
    """Per-coordinate distance lookups for one instance."""

    def __init__(self, cls: FunctionClass, design: Sequence[int], metric: Metric | None, alpha: Fraction):
        self.cls = cls
        self.design = tuple(design)
        self.metric = Metric.absolute() if metric is None else metric
        self.alpha = alpha
        self.grid = cls.grid
        self.dist = self.metric.distances(self.grid)
        self.rows = [tuple(row[x] for x in self.design) for row in cls.values]
        self.alphabet = list(self.grid.alphabet())

    def center(self, members: Sequence[int]) -> tuple[int, ...] | None:
        """A grid center within ``alpha`` of every member on every coordinate, or None."""
        out = []
        for t in range(len(self.design)):
            vals = {self.rows[f][t] for f in members}
            if self.metric.is_absolute:
                lo, hi = min(vals), max(vals)
                if Fraction(hi - lo, self.grid.Q) > 2 * self.alpha:
                    return None
                c = (lo + hi) // 2
                if Fraction(max(c - lo, hi - c), self.grid.Q) > self.alpha:
                    return None
                out.append(c)
            else:
                for c in self.alphabet:
                    if all(self.dist[(v, c)] <= self.alpha for v in vals):
                        out.append(c)
                        break
                else:
                    return None
        return tuple(out)

    def close(self, f: int, center: Sequence[int]) -> bool:
        return all(self.dist[(v, c)] <= self.alpha for v, c in zip(self.rows[f], center))

    def separated(self, f: int, g: int) -> bool:
        return any(self.dist[(a, b)] >= self.alpha for a, b in zip(self.rows[f], self.rows[g]))


def is_cover(cls: FunctionClass, design: Sequence[int], metric: Metric | None, alpha, centers) -> bool:
    """Every function lies within ``alpha`` of some center on every design coordinate."""
    geo = _Geometry(cls, design, metric, _validate(cls, design, alpha, metric))
    return all(any(geo.close(f, c) for c in centers) for f in range(cls.n_functions))


def _canonical(geo: _Geometry, groups: list[list[int]]) -> CoverSet:
    centers = sorted({geo.center(g) for g in groups})
    assignment = []
    for f in range(geo.cls.n_functions):
        for i, c in enumerate(centers):
            if geo.close(f, c):
                assignment.append(i)
                break
    return CoverSet(tuple(centers), tuple(assignment))


def cover_greedy(cls: FunctionClass, design: Sequence[int], metric: Metric | None = None, alpha=0):
    """First-fit cover in function order; an upper bound on the minimum."""
    geo = _Geometry(cls, design, metric, _validate(cls, design, alpha, metric))
    groups = _first_fit(geo, range(cls.n_functions))
    cover = _canonical(geo, groups)
    return len(cover), cover


def _first_fit(geo: _Geometry, order) -> list[list[int]]:
    groups: list[list[int]] = []
    for f in order:
        for g in groups:
            if geo.center(g + [f]) is not None:
                g.append(f)
                break
        else:
            groups.append([f])
    return groups


def cover_min_exact(cls: FunctionClass, design: Sequence[int], metric: Metric | None = None, alpha=0):
    """Minimum cover size by branch and bound over group assignments.

    Functions are placed in order of decreasing eccentricity, each into an
    existing compatible group or a new one; the first-fit cover is the
    starting incumbent.
    """
    if cls.n_functions > COVER_EXACT_CAP:
        raise CapExceeded(f"|F| = {cls.n_functions} exceeds the exact cover cap {COVER_EXACT_CAP}; use cover_greedy")
    geo = _Geometry(cls, design, metric, _validate(cls, design, alpha, metric))
    n = cls.n_functions

    def ecc(f):
        return max((max((geo.dist[(a, b)] for a, b in zip(geo.rows[f], geo.rows[g])), default=Fraction(0))
                    for g in range(n)), default=Fraction(0))

    order = sorted(range(n), key=lambda f: (-ecc(f), f))
    best = _first_fit(geo, order)
    compat = [[geo.center([f, g]) is not None for g in range(n)] for f in range(n)]
    groups: list[list[int]] = []

    def rec(i):
        nonlocal best
        if len(groups) >= len(best):
            return
        if i == n:
            best = [list(g) for g in groups]
            return
        f = order[i]
        for g in groups:
            if all(compat[f][h] for h in g) and geo.center(g + [f]) is not None:
                g.append(f)
                rec(i + 1)
                g.pop()
        groups.append([f])
        rec(i + 1)
        groups.pop()

    rec(0)
    cover = _canonical(geo, best)
    return len(cover), cover


def packing_max_exact(cls: FunctionClass, design: Sequence[int], metric: Metric | None = None, alpha=0):
    """Largest pairwise ``alpha``-separated subset (separation uses ``>= alpha``)."""
    if cls.n_functions > PACKING_EXACT_CAP:
        raise CapExceeded(f"|F| = {cls.n_functions} exceeds the exact packing cap {PACKING_EXACT_CAP}")
    geo = _Geometry(cls, design, metric, _validate(cls, design, alpha, metric))
    n = cls.n_functions
    adj = [0] * n
    for f in range(n):
        for g in range(n):
            if f != g and geo.separated(f, g):
                adj[f] |= 1 << g
    best = 0

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def expand(r, p, x):
        nonlocal best
        if not p and not x:
            if r.bit_count() > best.bit_count() or (r.bit_count() == best.bit_count() and _lex_less(r, best)):
                best = r
            return
        if r.bit_count() + p.bit_count() < best.bit_count():
            return
        pivot = max(bits(p | x), key=lambda u: (adj[u] & p).bit_count())
        for v in bits(p & ~adj[pivot]):
            expand(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, (1 << n) - 1, 0)
    subset = tuple(bits(best))
    return len(subset), subset


def _lex_less(a: int, b: int) -> bool:
    """Compare two equal-size index sets as sorted tuples."""
    if b == 0:
        return True
    ta = sorted(i for i in range(a.bit_length()) if a >> i & 1)
    tb = sorted(i for i in range(b.bit_length()) if b >> i & 1)
    return ta < tb
