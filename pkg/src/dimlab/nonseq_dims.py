"""Exact non-sequential dimensions: gapped (integer and real), fat-shattering, fixed-scale.

The search works on numerators over the class denominator.  For every point
it builds a list of candidate witnesses, each summarised by two bitsets over
the functions: the functions that may take the ``-1`` label and those that may
take the ``+1`` label.  A partial assignment is a map from "realised pattern
set" (an int over ``2**j`` patterns, newest coordinate most significant) to the
set of functions realising exactly those patterns.  A prefix is viable only
while the union of pattern sets is full.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .combinatorics import sign_patterns
from .core import (
    CapExceeded,
    FunctionClass,
    Metric,
    REAL_GRID,
    INTEGER,
    WitnessPair,
    as_fraction,
    format_fraction,
)

GAPPED_INTEGER = "gapped-integer"
GAPPED_REAL = "gapped-real"
FAT = "fat"
FIXED = "fixed"
KINDS = (GAPPED_INTEGER, GAPPED_REAL, FAT, FIXED)

MAX_PATTERN_DEPTH = 20


@dataclass(frozen=True)
class ShatterCertificate:
    """Points, witnesses and one realizer per sign pattern (pattern index order)."""

    kind: str
    points: tuple[int, ...]
    witnesses: tuple[WitnessPair, ...]
    realizers: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.points)

    def realizer(self, eps: Sequence[int]) -> int:
        idx = 0
        for e in eps:
            idx = 2 * idx + (e == 1)
        return self.realizers[idx]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "points": list(self.points),
            "witnesses": [w.to_json() for w in self.witnesses],
            "realizers": list(self.realizers),
        }

    @classmethod
    def from_json(cls, obj: dict) -> ShatterCertificate:
        return cls(
            obj["kind"],
            tuple(obj["points"]),
            tuple(WitnessPair.from_json(w) for w in obj["witnesses"]),
            tuple(obj["realizers"]),
        )


# ---------------------------------------------------------------------------
# parameter handling


def _metric(metric: Metric | None) -> Metric:
    return Metric.absolute() if metric is None else metric


def _scale_num(cls: FunctionClass, value, name: str, *, positive: bool = True) -> int:
    v = as_fraction(value)
    if v < 0 or (positive and v == 0):
        raise ValueError(f"{name} must be {'positive' if positive else 'nonnegative'}")
    return cls.grid.numerator(v, what=name)


def _half_alpha_num(cls: FunctionClass, alpha) -> int:
    a = as_fraction(alpha)
    if a <= 0:
        raise ValueError("alpha must be positive")
    if not cls.grid.representable(a / 2):
        raise ValueError(f"alpha/2 = {format_fraction(a / 2)} is not representable on the 1/{cls.Q} grid")
    return cls.grid.numerator(a / 2)


def _require(cls: FunctionClass, kind: str):
    if kind == GAPPED_INTEGER and cls.grid.kind != INTEGER:
        raise ValueError("gapped-integer needs an integer-alphabet class")
    if kind != GAPPED_INTEGER and cls.grid.kind != REAL_GRID:
        raise ValueError(f"{kind} needs a real-grid class")


# ---------------------------------------------------------------------------
# witness candidates; every candidate is (lo, hi, lo_bits, hi_bits) with numerators


def _bits(column: Sequence[int], pred) -> int:
    out = 0
    for f, v in enumerate(column):
        if pred(v):
            out |= 1 << f
    return out


def witness_candidates(kind: str, cls: FunctionClass, x: int, alpha, beta=None, metric: Metric | None = None,
                       rows: Sequence[int] | None = None) -> list[tuple[int, int, int, int]]:
    """Candidate witnesses at ``x`` sorted by ``(lo, hi)``; bitsets index the class rows.

    When ``rows`` is given only those functions' values seed the candidates and
    appear in the bitsets.
    """
    metric = _metric(metric)
    grid = cls.grid
    column = cls.column(x)
    if rows is None:
        rows = range(cls.n_functions)
    rows = list(rows)
    values = sorted({column[f] for f in rows})
    live = 0
    for f in rows:
        live |= 1 << f
    out = []
    if kind in (GAPPED_INTEGER, GAPPED_REAL):
        dist = metric.distances(grid)
        if kind == GAPPED_INTEGER:
            a_min = as_fraction(alpha)
            cands = values
            close = lambda v, s: v == s
        else:
            a_min = as_fraction(alpha)
            b_num = _scale_num(cls, beta, "beta")
            b_val = as_fraction(beta)
            if metric.is_absolute:
                cands = sorted({grid.clip(v + k) for v in values for k in (-b_num, 0, b_num)})
                close = lambda v, s: abs(v - s) <= b_num
            else:
                cands = values
                close = lambda v, s: dist[(v, s)] <= b_val
        for i, lo in enumerate(cands):
            for hi in cands[i:]:
                if lo == hi and a_min > 0:
                    continue
                if dist[(lo, hi)] < a_min:
                    continue
                lo_bits = _bits(column, lambda v: close(v, lo)) & live
                hi_bits = _bits(column, lambda v: close(v, hi)) & live
                if lo_bits and hi_bits:
                    out.append((lo, hi, lo_bits, hi_bits))
        return out
    h = _half_alpha_num(cls, alpha)
    if kind == FAT:
        cands = sorted({s for v in values for s in (v - h, v + h) if grid.contains(s)})
        for s in cands:
            lo_bits = _bits(column, lambda v: s - v >= h) & live
            hi_bits = _bits(column, lambda v: v - s >= h) & live
            if lo_bits and hi_bits:
                out.append((s, s, lo_bits, hi_bits))
        return out
    if kind == FIXED:
        present = set(values)
        cands = sorted({v - h for v in values if v - 2 * h in present})
        for s in cands:
            lo_bits = _bits(column, lambda v: v == s - h) & live
            hi_bits = _bits(column, lambda v: v == s + h) & live
            if lo_bits and hi_bits:
                out.append((s, s, lo_bits, hi_bits))
        return out
    raise ValueError(f"unknown kind {kind!r}")


def _prune_dominated(cands):
    """Drop candidates whose label sets are contained in another's (either orientation)."""
    uniq = {}
    for c in cands:
        uniq.setdefault((c[2], c[3]), c)
    items = list(uniq.values())
    keep = []
    for i, (_, _, lo, hi) in enumerate(items):
        dominated = False
        for j, (_, _, lo2, hi2) in enumerate(items):
            if i == j:
                continue
            sub = (lo & ~lo2 == 0 and hi & ~hi2 == 0) or (lo & ~hi2 == 0 and hi & ~lo2 == 0)
            if not sub:
                continue
            strict = (lo, hi) != (lo2, hi2) and (lo, hi) != (hi2, lo2)
            if strict or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(items[i])
    return keep


# ---------------------------------------------------------------------------
# pattern-set state


def _extend(state: dict[int, int], lo_bits: int, hi_bits: int, shift: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for mask, fs in state.items():
        lo = fs & lo_bits
        hi = fs & hi_bits
        both = lo & hi
        if both:
            m = mask | (mask << shift)
            out[m] = out.get(m, 0) | both
        lo_only = lo & ~hi
        if lo_only:
            out[mask] = out.get(mask, 0) | lo_only
        hi_only = hi & ~lo
        if hi_only:
            m = mask << shift
            out[m] = out.get(m, 0) | hi_only
    return out


def _covers(state: dict[int, int], full: int) -> bool:
    acc = 0
    for m in state:
        acc |= m
        if acc == full:
            return True
    return acc == full


def _key(state: dict[int, int]):
    return tuple(sorted(state.items()))


class _Search:
    def __init__(self, cands_by_point: list[list], n_functions: int):
        self.cands = cands_by_point
        self.root = {1: (1 << n_functions) - 1}

    def max_dim(self) -> int:
        n = len(self.cands)
        best = 0
        seen = set()
        stack = [(0, 0, self.root)]
        while stack:
            start, depth, state = stack.pop()
            if depth > best:
                best = depth
            if depth + (n - start) <= best or depth >= MAX_PATTERN_DEPTH:
                continue
            shift = 1 << depth
            full = (1 << (shift << 1)) - 1
            for x in range(start, n):
                if depth + (n - x) <= best:
                    break
                for _, _, lo_bits, hi_bits in self.cands[x]:
                    child = _extend(state, lo_bits, hi_bits, shift)
                    if not _covers(child, full):
                        continue
                    k = (x, depth, _key(child))
                    if k in seen:
                        continue
                    seen.add(k)
                    stack.append((x + 1, depth + 1, child))
        return best

    def shatters(self, points: Sequence[int]) -> bool:
        return self.lex_witnesses(points, pruned=True) is not None

    def lex_witnesses(self, points: Sequence[int], pruned: bool = False, full_cands=None):
        """Lexicographically first witness tuple for ``points`` (indices into candidate lists)."""
        cands = self.cands if pruned or full_cands is None else full_cands
        failed = set()

        def rec(j, state):
            if j == len(points):
                return []
            shift = 1 << j
            full = (1 << (shift << 1)) - 1
            for ci, (_, _, lo_bits, hi_bits) in enumerate(cands[points[j]]):
                child = _extend(state, lo_bits, hi_bits, shift)
                if not _covers(child, full):
                    continue
                k = (j + 1, _key(child))
                if k in failed:
                    continue
                rest = rec(j + 1, child)
                if rest is not None:
                    return [ci] + rest
                failed.add(k)
            return None

        return rec(0, self.root)


def _dimension(kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None):
    full_cands = [witness_candidates(kind, cls, x, alpha, beta, metric) for x in range(cls.n_points)]
    pruned = [_prune_dominated(c) for c in full_cands]
    search = _Search(pruned, cls.n_functions)
    d = search.max_dim()
    if d == 0:
        return 0, ShatterCertificate(kind, (), (), (0,))
    for pts in combinations(range(cls.n_points), d):
        if search.shatters(pts):
            choice = search.lex_witnesses(pts, full_cands=full_cands)
            grid = cls.grid
            wits = tuple(
                WitnessPair(grid.value(full_cands[x][ci][0]), grid.value(full_cands[x][ci][1]))
                for x, ci in zip(pts, choice)
            )
            ok, realizers = is_shattered_nonseq(kind, cls, pts, wits, alpha, beta, metric)
            if not ok:
                raise AssertionError("internal error: search produced an invalid certificate")
            return d, ShatterCertificate(kind, tuple(pts), wits, realizers)
    raise AssertionError("internal error: dimension found without a witness subset")


def gapped_dim_integer(cls: FunctionClass, metric: Metric | None = None, alpha=1):
    """Largest ``d`` with a distinct point set shattered with exact realizers."""
    _require(cls, GAPPED_INTEGER)
    if as_fraction(alpha) < 0:
        raise ValueError("alpha must be nonnegative")
    return _dimension(GAPPED_INTEGER, cls, alpha, None, metric)


def gapped_dim_real(cls: FunctionClass, metric: Metric | None = None, alpha=None, beta=None):
    """Largest ``d`` shattered at scale ``(alpha, beta)``.

    Exact under the absolute metric; a lower bound under tabulated metrics.
    """
    _require(cls, GAPPED_REAL)
    _scale_num(cls, alpha, "alpha")
    _scale_num(cls, beta, "beta")
    return _dimension(GAPPED_REAL, cls, alpha, beta, metric)


def fat_dim(cls: FunctionClass, alpha):
    """Fat-shattering dimension ``vc(F, alpha)`` with margin ``alpha/2``."""
    _require(cls, FAT)
    _half_alpha_num(cls, alpha)
    return _dimension(FAT, cls, alpha)


def fixed_scale_dim(cls: FunctionClass, alpha):
    """Fat-shattering with the margin condition held with equality."""
    _require(cls, FIXED)
    _half_alpha_num(cls, alpha)
    return _dimension(FIXED, cls, alpha)


def dimension(kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None):
    if kind == GAPPED_INTEGER:
        return gapped_dim_integer(cls, metric, alpha)
    if kind == GAPPED_REAL:
        return gapped_dim_real(cls, metric, alpha, beta)
    if kind == FAT:
        return fat_dim(cls, alpha)
    if kind == FIXED:
        return fixed_scale_dim(cls, alpha)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


# ---------------------------------------------------------------------------
# verification


def label_matrix(kind: str, cls: FunctionClass, points: Sequence[int], witnesses: Sequence[WitnessPair],
                 alpha, beta=None, metric: Metric | None = None) -> np.ndarray:
    """``(|F|, d)`` array of label bits: 1 allows ``-1``, 2 allows ``+1``."""
    metric = _metric(metric)
    grid = cls.grid
    alpha = as_fraction(alpha)
    out = np.zeros((cls.n_functions, len(points)), dtype=np.int8)
    for t, (x, w) in enumerate(zip(points, witnesses)):
        for f in range(cls.n_functions):
            v = grid.value(cls.values[f][x])
            bits = 0
            for sign, bit in ((-1, 1), (1, 2)):
                s = w[sign]
                if kind == GAPPED_INTEGER:
                    ok = v == s
                elif kind == GAPPED_REAL:
                    ok = _dist_value(metric, cls, v, s) <= as_fraction(beta)
                elif kind == FAT:
                    ok = sign * (v - s) >= alpha / 2
                elif kind == FIXED:
                    ok = sign * (v - s) == alpha / 2
                else:
                    raise ValueError(f"unknown kind {kind!r}")
                if ok:
                    bits |= bit
            out[f, t] = bits
    return out


def _dist_value(metric: Metric, cls: FunctionClass, a: Fraction, b: Fraction) -> Fraction:
    if metric.is_absolute:
        return abs(a - b)
    grid = cls.grid
    return metric.dist(grid, grid.numerator(a, what="witness"), grid.numerator(b, what="witness"))


def is_shattered_nonseq(kind: str, cls: FunctionClass, points: Sequence[int], witnesses: Sequence[WitnessPair],
                        alpha, beta=None, metric: Metric | None = None):
    """Check the shattering condition; returns ``(ok, realizers)``.

    ``realizers`` lists, per pattern in index order, the lowest-index realizing
    function or ``-1`` when the pattern is not realized.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    points = tuple(points)
    witnesses = tuple(w if isinstance(w, WitnessPair) else WitnessPair.from_json(w) for w in witnesses)
    if len(points) != len(witnesses):
        raise ValueError("points and witnesses differ in length")
    if len(set(points)) != len(points):
        raise ValueError("shattered points must be distinct")
    d = len(points)
    if d > MAX_PATTERN_DEPTH:
        raise CapExceeded(f"d = {d} exceeds the pattern cap {MAX_PATTERN_DEPTH}")
    for x in points:
        if not 0 <= x < cls.n_points:
            raise IndexError(f"point index {x} out of range")
    metric = _metric(metric)
    gaps_ok = True
    if kind in (GAPPED_INTEGER, GAPPED_REAL):
        if kind == GAPPED_REAL and beta is None:
            raise ValueError("gapped-real needs beta")
        for w in witnesses:
            if _dist_value(metric, cls, w.lo, w.hi) < as_fraction(alpha):
                gaps_ok = False
            if kind == GAPPED_REAL and not (-1 <= w.lo <= 1 and -1 <= w.hi <= 1):
                gaps_ok = False
    labels = label_matrix(kind, cls, points, witnesses, alpha, beta, metric)
    realizers = []
    for eps in sign_patterns(d):
        need = np.array([1 if e == -1 else 2 for e in eps], dtype=np.int8)
        hit = np.all((labels & need) != 0, axis=1) if d else np.ones(cls.n_functions, dtype=bool)
        idx = np.flatnonzero(hit)
        realizers.append(int(idx[0]) if idx.size else -1)
    ok = gaps_ok and all(r >= 0 for r in realizers)
    return ok, tuple(realizers)
