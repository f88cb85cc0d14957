"""Offset Rademacher complexities, exact and Monte Carlo, and the block lower-bound instances.

For a sign path ``eps`` the per-path value is

    sup_f sum_t  C * eps_t * (f(x_t) - mu_t) - (f(x_t) - mu_t)**2

and the complexity is its average over all ``2**n`` paths.  All arithmetic
runs on integers after scaling by a common denominator, so results are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    LABEL_POINT,
    LABEL_VALUE,
    CapExceeded,
    FunctionClass,
    LabeledTree,
    as_fraction,
    format_fraction,
    path_from_index,
)
from .nonseq_dims import ShatterCertificate
from .rng import SplitMix64
from .sequential import TreeShatterCertificate

MAX_EXACT_N = 20
CHUNK_CELLS = 1 << 22
_INT64_HEADROOM = 1 << 62


@dataclass(frozen=True)
class OffsetInstance:
    """Class, contexts (design or tree), centres (vector or tree) and the constant ``C``."""

    cls: FunctionClass
    C: Fraction
    design: tuple[int, ...] | None = None
    mu: tuple[Fraction, ...] | None = None
    x_tree: LabeledTree | None = None
    mu_tree: LabeledTree | None = None

    def __post_init__(self):
        object.__setattr__(self, "C", as_fraction(self.C))
        if self.C <= 0:
            raise ValueError("C must be positive")
        seq = self.x_tree is not None
        if seq == (self.design is not None):
            raise ValueError("give exactly one of design or x_tree")
        if seq:
            if self.mu_tree is None or self.mu is not None:
                raise ValueError("a tree instance needs mu_tree and no mu vector")
            if self.x_tree.label_kind != LABEL_POINT or self.mu_tree.label_kind != LABEL_VALUE:
                raise ValueError("x_tree must hold points and mu_tree values")
            if self.x_tree.depth != self.mu_tree.depth:
                raise ValueError("x_tree and mu_tree differ in depth")
            points, mus = self.x_tree.labels, self.mu_tree.labels
        else:
            if self.mu is None or self.mu_tree is not None:
                raise ValueError("a design instance needs a mu vector and no mu_tree")
            object.__setattr__(self, "design", tuple(int(x) for x in self.design))
            object.__setattr__(self, "mu", tuple(as_fraction(m) for m in self.mu))
            if len(self.design) != len(self.mu):
                raise ValueError("design and mu differ in length")
            points, mus = self.design, self.mu
        for x in points:
            if not 0 <= x < self.cls.n_points:
                raise IndexError(f"context index {x} out of range")
        for m in mus:
            if not -1 <= m <= 1:
                raise ValueError(f"mu value {format_fraction(m)} outside [-1, 1]")

    @property
    def sequential(self) -> bool:
        return self.x_tree is not None

    @property
    def n(self) -> int:
        return self.x_tree.depth if self.sequential else len(self.design)

    def to_json(self) -> dict:
        out = {"C": format_fraction(self.C), "class": self.cls.to_json()}
        if self.sequential:
            out["x_tree"] = self.x_tree.to_json()
            out["mu_tree"] = self.mu_tree.to_json()
        else:
            out["design"] = list(self.design)
            out["mu"] = [format_fraction(m) for m in self.mu]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> OffsetInstance:
        fc = FunctionClass.from_json(obj["class"])
        if "x_tree" in obj:
            return cls(fc, as_fraction(obj["C"]), x_tree=LabeledTree.from_json(obj["x_tree"]),
                       mu_tree=LabeledTree.from_json(obj["mu_tree"]))
        return cls(fc, as_fraction(obj["C"]), design=tuple(obj["design"]), mu=tuple(as_fraction(m) for m in obj["mu"]))


class _Scaled:
    """Integer form of an instance: per-path objective times ``scale``."""

    def __init__(self, inst: OffsetInstance):
        self.inst = inst
        cls = inst.cls
        mus = inst.mu_tree.labels if inst.sequential else inst.mu
        L = cls.Q
        for m in mus:
            L = math.lcm(L, m.denominator)
        c = inst.C.denominator
        self.L = L
        self.lin = inst.C.numerator * L  # eps * D*L times this, over scale
        self.quad = c  # (D*L)**2 times this, over scale
        self.scale = L * L * c
        self.values = np.array(cls.values, dtype=np.int64) * (L // cls.Q)
        self.mu_num = np.array([int(m * L) for m in mus], dtype=np.int64)
        n = inst.n
        bound = n * (abs(self.lin) * 2 * L + self.quad * 4 * L * L)
        self.dtype = np.int64 if bound < _INT64_HEADROOM else object

    def path_values(self, eps: np.ndarray) -> list[int]:
        """Scaled per-path suprema for a ``(paths, n)`` array of signs."""
        inst = self.inst
        n = inst.n
        if n == 0:
            return [0] * eps.shape[0]
        if inst.sequential:
            bits = (eps > 0).astype(np.int64)
            idx = np.zeros((eps.shape[0], n), dtype=np.int64)
            prefix = np.zeros(eps.shape[0], dtype=np.int64)
            for t in range(n):
                idx[:, t] = (1 << t) - 1 + prefix
                prefix = 2 * prefix + bits[:, t]
            points = np.array(inst.x_tree.labels, dtype=np.int64)[idx]
            mus = self.mu_num[idx]
            fv = self.values[:, points]
            D = (fv - mus[None, :, :]).astype(self.dtype)
        else:
            fv = self.values[:, list(inst.design)]
            D = (fv - self.mu_num[None, :]).astype(self.dtype)
            D = np.broadcast_to(D[:, None, :], (D.shape[0], eps.shape[0], n))
        e = eps.astype(self.dtype)
        obj = (self.lin * e[None, :, :] * D - self.quad * D * D).sum(axis=2)
        return [int(v) for v in obj.max(axis=0)]


def _all_paths(n: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return np.where((idx[:, None] >> shifts[None, :]) & 1, 1, -1).astype(np.int64)


def _chunk(inst: OffsetInstance) -> int:
    return max(64, CHUNK_CELLS // max(1, inst.cls.n_functions * inst.n))


def _exact(inst: OffsetInstance) -> Fraction:
    n = inst.n
    if n > MAX_EXACT_N:
        raise CapExceeded(f"n = {n} exceeds the exact cap {MAX_EXACT_N}")
    sc = _Scaled(inst)
    chunk = _chunk(inst)
    total = 0
    for start in range(0, 1 << n, chunk):
        eps = _all_paths(n, start, min(1 << n, start + chunk))
        total += sum(sc.path_values(eps))
    return Fraction(total, (1 << n) * sc.scale)


def offset_rad_nonseq_exact(inst: OffsetInstance) -> Fraction:
    """Exact average over all sign vectors for a fixed design."""
    if inst.sequential:
        raise ValueError("use offset_rad_seq_exact for tree instances")
    return _exact(inst)


def offset_rad_seq_exact(inst: OffsetInstance) -> Fraction:
    """Exact average over all paths for tree-valued contexts and centres."""
    if not inst.sequential:
        raise ValueError("use offset_rad_nonseq_exact for design instances")
    return _exact(inst)


def offset_rad_exact(inst: OffsetInstance) -> Fraction:
    return _exact(inst)


def offset_rad_mc(inst: OffsetInstance, samples: int, seed: int, exhaustive: bool = False):
    """Monte Carlo estimate and standard error.

    Paths come from the SplitMix64 stream for ``seed``.  With ``exhaustive``
    every path is visited once and the exact value is returned with zero error.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if exhaustive:
        return _exact(inst), 0.0
    sc = _Scaled(inst)
    rng = SplitMix64(seed)
    vals: list[int] = []
    remaining = samples
    while remaining:
        m = min(_chunk(inst), remaining)
        eps = np.array([rng.signs(inst.n) for _ in range(m)], dtype=np.int64).reshape(m, inst.n)
        vals += sc.path_values(eps)
        remaining -= m
    est = Fraction(sum(vals), samples * sc.scale)
    if samples == 1:
        return est, math.inf
    mean = sum(vals) / samples
    var = sum((v - mean) ** 2 for v in vals) / (samples - 1)
    return est, math.sqrt(var / samples) / sc.scale


# ---------------------------------------------------------------------------
# block constructions


def block_length(gap: Fraction) -> int:
    """``k = max(floor(1/gap**2), 1)``."""
    gap = abs(as_fraction(gap))
    if gap == 0:
        raise ValueError("witness gap must be positive")
    return max(math.floor(1 / (gap * gap)), 1)


def build_block_design_nonseq(cert: ShatterCertificate, cls: FunctionClass, n: int, C) -> OffsetInstance:
    """Repeat each shattered point ``k_t`` times; the last point fills the remaining rounds.

    Centres are the witness midpoints on the first ``d - 1`` blocks and
    ``s_d[+1]`` on the tail.
    """
    d = cert.d
    if d == 0:
        raise ValueError("the block design needs a certificate with d >= 1")
    ks = [block_length(w.hi - w.lo) for w in cert.witnesses]
    head = sum(ks[:-1])
    if head > n:
        raise ValueError(f"budget n = {n} is below the first d-1 block lengths ({head})")
    design, mu = [], []
    for t in range(d - 1):
        w = cert.witnesses[t]
        design += [cert.points[t]] * ks[t]
        mu += [(w.lo + w.hi) / 2] * ks[t]
    design += [cert.points[-1]] * (n - head)
    mu += [cert.witnesses[-1].hi] * (n - head)
    return OffsetInstance(cls, as_fraction(C), design=tuple(design), mu=tuple(mu))


def block_schedule_length(cert: TreeShatterCertificate) -> int:
    """Longest total block length over all aggregated sign paths."""
    d = cert.d
    worst = 0
    for idx in range(1 << d):
        tilde = path_from_index(idx, d)
        worst = max(worst, sum(block_length(cert.witness_tree.label_at(tilde, t).gap) for t in range(1, d + 1)))
    return worst


def build_block_tree_seq(cert: TreeShatterCertificate, cls: FunctionClass, n: int, C, x0: int = 0) -> OffsetInstance:
    """Adaptive block trees of depth ``n``.

    Along each path the signs of finished blocks are aggregated into
    ``eps~``; block ``t`` repeats ``x~_t(eps~)`` for ``k_t(eps~)`` rounds with
    centre at the witness midpoint.  After the last block the contexts are
    ``x0`` with centre ``f^{eps~}(x0)``.
    """
    d = cert.d
    xt, wt = cert.x_tree, cert.witness_tree
    if not 0 <= x0 < cls.n_points:
        raise IndexError("padding point out of range")

    worst = block_schedule_length(cert)
    if worst > n:
        raise ValueError(f"budget n = {n} is below the longest block schedule ({worst})")

    size = (1 << n) - 1
    xs: list = [None] * size
    mus: list = [None] * size
    memo: dict = {}

    def label(tilde: tuple, t: int):
        hit = memo.get((tilde, t))
        if hit is None:
            if t <= d:
                w = wt.label_at(tilde, t)
                hit = (xt.label_at(tilde, t), (w.lo + w.hi) / 2, block_length(w.hi - w.lo))
            else:
                f = cert.realizer(tilde)
                hit = (x0, cls.grid.value(cls.values[f][x0]), None)
            memo[tilde, t] = hit
        return hit

    # walk the tree carrying the finished block signs and the running block sum
    stack = [(1, 0, (), 0, 0)]
    while stack:
        m, idx, tilde, start, partial = stack.pop()
        x, mu, k = label(tilde, len(tilde) + 1)
        node = (1 << (m - 1)) - 1 + idx
        xs[node], mus[node] = x, mu
        if m == n:
            continue
        for bit, e in ((0, -1), (1, 1)):
            s2 = partial + e
            if k is not None and m - start == k:
                child = (m + 1, 2 * idx + bit, tilde + (1 if s2 >= 0 else -1,), m, 0)
            else:
                child = (m + 1, 2 * idx + bit, tilde, start, s2)
            stack.append(child)
    return OffsetInstance(cls, as_fraction(C), x_tree=LabeledTree(n, tuple(xs), LABEL_POINT),
                          mu_tree=LabeledTree(n, tuple(mus), LABEL_VALUE))
