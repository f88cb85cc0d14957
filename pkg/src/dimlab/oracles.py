"""Slow reference implementations written straight from the definitions.

These share no search code with the main modules.  Witnesses range over the
whole value grid, optionally refined by an integer factor, and shattering is
decided by listing every sign pattern.  Intended for tiny instances only.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .core import INTEGER, FunctionClass, Metric, as_fraction


def _values(cls: FunctionClass):
    return [[cls.grid.value(v) for v in row] for row in cls.values]


def _witness_grid(cls: FunctionClass, refine: int) -> list[Fraction]:
    if cls.grid.kind == INTEGER:
        return [Fraction(v) for v in cls.grid.alphabet()]
    q = cls.grid.Q * refine
    return [Fraction(k, q) for k in range(-q, q + 1)]


def _dist(metric: Metric | None, cls: FunctionClass):
    if metric is None or metric.is_absolute:
        return lambda a, b: abs(a - b)
    grid = cls.grid

    def d(a, b):
        return metric.dist(grid, grid.numerator(a), grid.numerator(b))

    return d


def _point_options(kind, cls, x, alpha, beta, metric, refine):
    """Distinct per-function label tuples over every admissible witness at ``x``."""
    vals = [row[x] for row in _values(cls)]
    alpha = as_fraction(alpha)
    dist = _dist(metric, cls)
    ws = _witness_grid(cls, refine)
    if metric is not None and not metric.is_absolute:
        ws = [w for w in ws if cls.grid.representable(w)]
    opts = set()
    if kind in ("gapped-integer", "gapped-real"):
        for lo in ws:
            for hi in ws:
                if dist(lo, hi) < alpha:
                    continue
                if kind == "gapped-integer":
                    lab = tuple((v == lo, v == hi) for v in vals)
                else:
                    b = as_fraction(beta)
                    lab = tuple((dist(v, lo) <= b, dist(v, hi) <= b) for v in vals)
                opts.add(lab)
    else:
        for s in ws:
            if kind == "fat":
                lab = tuple((s - v >= alpha / 2, v - s >= alpha / 2) for v in vals)
            else:
                lab = tuple((s - v == alpha / 2, v - s == alpha / 2) for v in vals)
            opts.add(lab)
    return [o for o in opts if any(a for a, _ in o) and any(b for _, b in o)]


def _extend_patterns(patterns, option):
    """Per-function realised patterns after appending one coordinate."""
    out = []
    for pats, (neg, pos) in zip(patterns, option):
        nxt = set()
        if neg:
            nxt |= {p + (0,) for p in pats}
        if pos:
            nxt |= {p + (1,) for p in pats}
        out.append(nxt)
    return out


def oracle_nonseq_dim(kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None,
                      refine: int = 1) -> int:
    """Largest set of distinct points shattered by some witness tuple.

    Every prefix of a shattered tuple is itself shattered, so chains are
    grown one point at a time and abandoned as soon as a pattern is missing.
    Swapping the two witness values only relabels patterns, so one
    orientation per option is kept.
    """
    opts = []
    for x in range(cls.n_points):
        canon = {min(o, tuple((b, a) for a, b in o)) for o in _point_options(kind, cls, x, alpha, beta, metric, refine)}
        opts.append(sorted(canon))
    best = 0

    def extend(patterns, depth, start):
        nonlocal best
        best = max(best, depth)
        for x in range(start, cls.n_points):
            if best == cls.n_points or depth + cls.n_points - x <= best:
                return
            for o in opts[x]:
                nxt = _extend_patterns(patterns, o)
                if len(set().union(*nxt)) == 2 ** (depth + 1):
                    extend(nxt, depth + 1, x + 1)

    extend([{()} for _ in range(cls.n_functions)], 0, 0)
    return best


def oracle_seq_dim(kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None,
                   refine: int = 1) -> int:
    """Tree dimension from the definition: choose a point and witness, recurse on both sides."""
    vals = _values(cls)
    alpha = as_fraction(alpha)
    dist = _dist(metric, cls)
    ws = _witness_grid(cls, refine)
    if metric is not None and not metric.is_absolute:
        ws = [w for w in ws if cls.grid.representable(w)]
    splits = []
    for x in range(cls.n_points):
        if kind in ("gapped-integer", "gapped-real"):
            for lo in ws:
                for hi in ws:
                    if dist(lo, hi) < alpha:
                        continue
                    if kind == "gapped-integer":
                        sides = (frozenset(f for f in range(len(vals)) if vals[f][x] == lo),
                                 frozenset(f for f in range(len(vals)) if vals[f][x] == hi))
                    else:
                        b = as_fraction(beta)
                        sides = (frozenset(f for f in range(len(vals)) if dist(vals[f][x], lo) <= b),
                                 frozenset(f for f in range(len(vals)) if dist(vals[f][x], hi) <= b))
                    splits.append(sides)
        else:
            for s in ws:
                splits.append((frozenset(f for f in range(len(vals)) if s - vals[f][x] >= alpha / 2),
                               frozenset(f for f in range(len(vals)) if vals[f][x] - s >= alpha / 2)))
    splits = sorted(set(splits), key=lambda p: (sorted(p[0]), sorted(p[1])))

    @lru_cache(maxsize=None)
    def dim(group: frozenset) -> int:
        best = 0
        for lo, hi in splits:
            a, b = group & lo, group & hi
            if a and b and a != group and b != group:
                best = max(best, 1 + min(dim(a), dim(b)))
        return best

    return dim(frozenset(range(len(vals))))


def oracle_cover_min(cls: FunctionClass, design, metric: Metric | None, alpha) -> int:
    """Smallest cover by trying every family of coverable subsets, smallest first.

    Under the absolute metric a subset is coverable when every coordinate's
    spread is at most ``2 alpha`` (real-valued centers); otherwise some grid
    value must be within ``alpha`` of all members.
    """
    vals = _values(cls)
    alpha = as_fraction(alpha)
    n = len(vals)
    absolute = metric is None or metric.is_absolute
    dist = _dist(metric, cls)
    alphabet = [cls.grid.value(v) for v in cls.grid.alphabet()]

    def coverable(members):
        for x in design:
            col = [vals[f][x] for f in members]
            if absolute:
                if max(col) - min(col) > 2 * alpha:
                    return False
            elif not any(all(dist(v, c) <= alpha for v in col) for c in alphabet):
                return False
        return True

    groups = [frozenset(s) for r in range(1, n + 1) for s in itertools.combinations(range(n), r) if coverable(s)]
    maximal = [g for g in groups if not any(g < h for h in groups)]
    everyone = frozenset(range(n))
    for k in range(1, n + 1):
        for fam in itertools.combinations(maximal, k):
            if frozenset().union(*fam) == everyone:
                return k
    return n


def oracle_packing_max(cls: FunctionClass, design, metric: Metric | None, alpha) -> int:
    vals = _values(cls)
    alpha = as_fraction(alpha)
    dist = _dist(metric, cls)
    n = len(vals)

    def sep(f, g):
        return any(dist(vals[f][x], vals[g][x]) >= alpha for x in design)

    for r in range(n, 0, -1):
        for s in itertools.combinations(range(n), r):
            if all(sep(f, g) for f, g in itertools.combinations(s, 2)):
                return r
    return 0


def oracle_offset_rademacher(cls: FunctionClass, design, mu, C) -> Fraction:
    """Average over all sign vectors of the best offset objective, in plain Fractions."""
    vals = _values(cls)
    C = as_fraction(C)
    mu = [as_fraction(m) for m in mu]
    n = len(design)
    total = Fraction(0)
    for eps in itertools.product((-1, 1), repeat=n):
        total += max(
            sum(C * e * (row[x] - m) - (row[x] - m) ** 2 for e, x, m in zip(eps, design, mu)) for row in vals
        )
    return total / 2**n
