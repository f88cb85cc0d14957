"""Tree shattering, sequential dimensions and sequential covers.

Dimensions follow the Littlestone-style recursion

    dim(G) = max over x and witnesses s of 1 + min(dim(G_lo), dim(G_hi)),

with ``dim`` of a nonempty class at least 0, memoised on the subclass bitmask.
Witness candidates are the non-sequential candidates of the whole class; at a
node only their restriction to the subclass matters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import sign_patterns
from .core import (
    INTEGER,
    LABEL_POINT,
    LABEL_VALUE,
    LABEL_WITNESS,
    REAL_GRID,
    CapExceeded,
    FunctionClass,
    LabeledTree,
    Metric,
    WitnessPair,
    as_fraction,
    path_index,
)
from .nonseq_dims import FAT, GAPPED_INTEGER, GAPPED_REAL, _dist_value, label_matrix, witness_candidates

SEQ_KINDS = (GAPPED_INTEGER, GAPPED_REAL, FAT)
MAX_TREE_DEPTH = 20
BRUTE_MAX_DEPTH = 3
BRUTE_MAX_FUNCTIONS = 8
BRUTE_MAX_TREES = 16384


@dataclass(frozen=True)
class TreeShatterCertificate:
    kind: str
    x_tree: LabeledTree
    witness_tree: LabeledTree
    realizers: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.x_tree.depth

    def realizer(self, eps: Sequence[int]) -> int:
        return self.realizers[path_index(eps)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "x_tree": self.x_tree.to_json(),
            "witness_tree": self.witness_tree.to_json(),
            "realizers": list(self.realizers),
        }

    @classmethod
    def from_json(cls, obj: dict) -> TreeShatterCertificate:
        return cls(obj["kind"], LabeledTree.from_json(obj["x_tree"]), LabeledTree.from_json(obj["witness_tree"]),
                   tuple(obj["realizers"]))


@dataclass(frozen=True)
class SeqCoverSet:
    trees: tuple[LabeledTree, ...]

    def __len__(self) -> int:
        return len(self.trees)

    def to_json(self) -> dict:
        return {"size": len(self.trees), "trees": [t.to_json() for t in self.trees]}


class SeqSolver:
    """Memoised recursion for one (kind, class, scale) triple."""

    def __init__(self, kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None):
        if kind not in SEQ_KINDS:
            raise ValueError(f"unknown sequential kind {kind!r}")
        alpha = as_fraction(alpha)
        if kind == GAPPED_INTEGER:
            if cls.grid.kind != INTEGER:
                raise ValueError("gapped-integer needs an integer-alphabet class")
            if alpha <= 0:
                raise ValueError("the sequential integer dimension needs alpha > 0")
        else:
            if cls.grid.kind != REAL_GRID:
                raise ValueError(f"{kind} needs a real-grid class")
        if kind == GAPPED_REAL:
            if beta is None:
                raise ValueError("gapped-real needs beta")
            beta = as_fraction(beta)
            cls.grid.numerator(alpha, what="alpha")
            cls.grid.numerator(beta, what="beta")
            if not 0 < 2 * beta < alpha:
                raise ValueError("the sequential gapped dimension is finite only for 0 < 2*beta < alpha")
        self.kind = kind
        self.cls = cls
        self.alpha = alpha
        self.beta = beta
        self.metric = Metric.absolute() if metric is None else metric
        self.cands = [witness_candidates(kind, cls, x, alpha, beta, self.metric) for x in range(cls.n_points)]
        self.memo: dict[int, tuple[int, tuple | None]] = {}
        self.full = (1 << cls.n_functions) - 1

    def dim(self, mask: int | None = None) -> int:
        if mask is None:
            mask = self.full
        if mask == 0:
            raise ValueError("the empty subclass has dimension -infinity")
        return self._solve(mask)[0]

    def _solve(self, mask: int):
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        cap = mask.bit_count().bit_length() - 1
        best, choice = 0, None
        seen = set()
        for x, cands in enumerate(self.cands):
            if best >= cap:
                break
            for ci, (_, _, lo_bits, hi_bits) in enumerate(cands):
                lo, hi = mask & lo_bits, mask & hi_bits
                if not lo or not hi or (lo, hi) in seen:
                    continue
                seen.add((lo, hi))
                small, large = (lo, hi) if lo.bit_count() <= hi.bit_count() else (hi, lo)
                if small.bit_count().bit_length() <= best:
                    continue
                a = self._solve(small)[0]
                if a + 1 <= best:
                    continue
                b = self._solve(large)[0]
                val = 1 + min(a, b)
                if val > best:
                    best, choice = val, (x, ci)
                    if best >= cap:
                        break
        self.memo[mask] = (best, choice)
        return best, choice

    def certificate(self) -> TreeShatterCertificate:
        d = self.dim()
        xs, ws = self._build(self.full, d)
        x_tree = LabeledTree(d, tuple(xs), LABEL_POINT)
        w_tree = LabeledTree(d, tuple(ws), LABEL_WITNESS)
        ok, realizers = is_tree_shattered(self.kind, self.cls, x_tree, w_tree, self.alpha, self.beta, self.metric)
        if not ok:
            raise AssertionError("internal error: recursion produced an invalid tree certificate")
        return TreeShatterCertificate(self.kind, x_tree, w_tree, realizers)

    def _build(self, mask: int, depth: int):
        """Heap-ordered labels of a depth-``depth`` shattered tree rooted at ``mask``."""
        if depth == 0:
            return [], []
        _, choice = self._solve(mask)
        x, ci = choice
        lo_num, hi_num, lo_bits, hi_bits = self.cands[x][ci]
        grid = self.cls.grid
        w = WitnessPair(grid.value(lo_num), grid.value(hi_num))
        lx, lw = self._build(mask & lo_bits, depth - 1)
        rx, rw = self._build(mask & hi_bits, depth - 1)
        xs, ws = [x], [w]
        for t in range(1, depth):
            a, b = (1 << (t - 1)) - 1, (1 << t) - 1
            xs += lx[a:b] + rx[a:b]
            ws += lw[a:b] + rw[a:b]
        return xs, ws


def _dim(kind, cls, alpha, beta=None, metric=None):
    solver = SeqSolver(kind, cls, alpha, beta, metric)
    cert = solver.certificate()
    return cert.d, cert


def seq_gapped_dim_integer(cls: FunctionClass, metric: Metric | None = None, alpha=1):
    return _dim(GAPPED_INTEGER, cls, alpha, None, metric)


def seq_gapped_dim_real(cls: FunctionClass, metric: Metric | None = None, alpha=None, beta=None):
    return _dim(GAPPED_REAL, cls, alpha, beta, metric)


def sfat_dim(cls: FunctionClass, alpha):
    return _dim(FAT, cls, alpha)


def seq_dimension(kind: str, cls: FunctionClass, alpha, beta=None, metric: Metric | None = None):
    return _dim(kind, cls, alpha, beta, metric)


def is_tree_shattered(kind: str, cls: FunctionClass, x_tree: LabeledTree, witness_tree: LabeledTree,
                      alpha, beta=None, metric: Metric | None = None):
    """Check every path of the trees; returns ``(ok, realizers)`` in path-index order (``-1`` if none)."""
    if x_tree.depth != witness_tree.depth:
        raise ValueError("x tree and witness tree differ in depth")
    if x_tree.label_kind != LABEL_POINT or witness_tree.label_kind != LABEL_WITNESS:
        raise ValueError("expected a point-labelled tree and a witness-labelled tree")
    d = x_tree.depth
    if d > MAX_TREE_DEPTH:
        raise CapExceeded(f"depth {d} exceeds the tree cap {MAX_TREE_DEPTH}")
    if kind not in SEQ_KINDS:
        raise ValueError(f"unknown sequential kind {kind!r}")
    metric = Metric.absolute() if metric is None else metric
    gaps_ok = True
    if kind in (GAPPED_INTEGER, GAPPED_REAL):
        for w in witness_tree.labels:
            if _dist_value(metric, cls, w.lo, w.hi) < as_fraction(alpha):
                gaps_ok = False
            if kind == GAPPED_REAL and not (-1 <= w.lo <= 1 and -1 <= w.hi <= 1):
                gaps_ok = False
    labels = label_matrix(kind, cls, x_tree.labels, witness_tree.labels, alpha, beta, metric) if d else None
    realizers = []
    for eps in sign_patterns(d):
        hit = np.ones(cls.n_functions, dtype=bool)
        for t in range(1, d + 1):
            node = (1 << (t - 1)) - 1 + path_index(eps[: t - 1])
            need = 1 if eps[t - 1] == -1 else 2
            hit &= (labels[:, node] & need) != 0
        idx = np.flatnonzero(hit)
        realizers.append(int(idx[0]) if idx.size else -1)
    return gaps_ok and all(r >= 0 for r in realizers), tuple(realizers)


# ---------------------------------------------------------------------------
# sequential covers


def _value_tree(cls: FunctionClass, labels: Sequence[int], depth: int) -> LabeledTree:
    return LabeledTree(depth, tuple(cls.grid.value(v) for v in labels), LABEL_VALUE)


def seq_cover_construct(cls: FunctionClass, metric: Metric | None, x_tree: LabeledTree, alpha,
                        exhaustive_base: bool = True) -> SeqCoverSet:
    """Cover built by the inductive construction: split on the root value, merge the top-dimension block.

    Values ``k`` whose slice keeps the full dimension are merged into one block
    rooted at the value of its lowest-index function; the other slices are
    covered separately.  Child covers are joined pairwise, padding the shorter
    list with its last tree.  With ``exhaustive_base`` the case ``n <= d``
    returns all constant-level trees.
    """
    if x_tree.label_kind != LABEL_POINT:
        raise ValueError("x_tree must carry domain-point labels")
    for x in x_tree.labels:
        if not 0 <= x < cls.n_points:
            raise IndexError(f"tree label {x} out of range")
    solver = SeqSolver(GAPPED_INTEGER, cls, alpha, None, metric)
    values = cls.values
    alphabet = list(cls.grid.alphabet())

    def lowest(mask):
        return (mask & -mask).bit_length() - 1

    def build(mask: int, labels: tuple[int, ...], n: int) -> list[tuple[int, ...]]:
        if n == 0:
            return [()]
        d = solver.dim(mask)
        if d == 0:
            f0 = lowest(mask)
            return [tuple(values[f0][x] for x in labels)]
        if n <= d and exhaustive_base:
            out = []
            for combo in itertools.product(alphabet, repeat=n):
                out.append(tuple(v for t, v in enumerate(combo) for _ in range(1 << t)))
            return out
        root = labels[0]
        left, right = _split_labels(labels, n)
        slices = {}
        f = mask
        while f:
            low = f & -f
            i = low.bit_length() - 1
            slices[values[i][root]] = slices.get(values[i][root], 0) | low
            f ^= low
        top = [k for k in sorted(slices) if solver.dim(slices[k]) == d]
        blocks = []
        if top:
            merged = 0
            for k in top:
                merged |= slices[k]
            blocks.append((values[lowest(merged)][root], merged))
        blocks += [(k, slices[k]) for k in sorted(slices) if k not in top]
        out = []
        for v1, sub in blocks:
            out += _join(v1, build(sub, left, n - 1), build(sub, right, n - 1), n)
        uniq = list(dict.fromkeys(out))
        return uniq

    trees = build(solver.full, x_tree.labels, x_tree.depth)
    return SeqCoverSet(tuple(_value_tree(cls, t, x_tree.depth) for t in trees))


def _split_labels(labels: Sequence, n: int):
    left, right = [], []
    for t in range(2, n + 1):
        a = (1 << (t - 1)) - 1
        half = 1 << (t - 2)
        left += labels[a : a + half]
        right += labels[a + half : a + 2 * half]
    return tuple(left), tuple(right)


def _join(root, lefts: list, rights: list, n: int) -> list[tuple]:
    m = max(len(lefts), len(rights))
    lefts = lefts + [lefts[-1]] * (m - len(lefts))
    rights = rights + [rights[-1]] * (m - len(rights))
    out = []
    for lt, rt in zip(lefts, rights):
        labels = [root]
        for t in range(1, n):
            a, b = (1 << (t - 1)) - 1, (1 << t) - 1
            labels += list(lt[a:b]) + list(rt[a:b])
        out.append(tuple(labels))
    return out


def _coverage_matrix(cls: FunctionClass, metric: Metric | None, x_tree: LabeledTree, alpha,
                     tree_values: np.ndarray) -> np.ndarray:
    """Boolean ``(trees, |F|, paths)`` array: tree covers function ``f`` along path ``p``."""
    metric = Metric.absolute() if metric is None else metric
    grid = cls.grid
    alpha = as_fraction(alpha)
    alphabet = list(grid.alphabet())
    close = np.array([[metric.dist(grid, a, b) <= alpha for b in alphabet] for a in alphabet], dtype=bool)
    n = x_tree.depth
    fvals = np.array([[row[x] for x in x_tree.labels] for row in cls.values], dtype=np.int64) - grid.lo
    tv = tree_values - grid.lo
    node_ok = close[tv[:, None, :], fvals[None, :, :]]
    paths = []
    for eps in sign_patterns(n):
        paths.append([(1 << (t - 1)) - 1 + path_index(eps[: t - 1]) for t in range(1, n + 1)])
    out = np.ones((tree_values.shape[0], cls.n_functions, len(paths)), dtype=bool)
    for p, nodes in enumerate(paths):
        for node in nodes:
            out[:, :, p] &= node_ok[:, :, node]
    return out


def is_seq_cover(cls: FunctionClass, metric: Metric | None, x_tree: LabeledTree, alpha, trees) -> bool:
    """Every function is ``alpha``-close along every path to at least one tree."""
    trees = trees.trees if isinstance(trees, SeqCoverSet) else tuple(trees)
    if not trees:
        return False
    grid = cls.grid
    for t in trees:
        if t.depth != x_tree.depth:
            raise ValueError("cover tree depth differs from the x tree")
    if x_tree.depth == 0:
        return True
    tv = np.array([[grid.numerator(v, what="cover value") for v in t.labels] for t in trees], dtype=np.int64)
    if tv.min() < grid.lo or tv.max() > grid.hi:
        raise ValueError("cover tree value outside the grid")
    cov = _coverage_matrix(cls, metric, x_tree, alpha, tv)
    return bool(cov.any(axis=0).all())


def seq_cover_min_bruteforce(cls: FunctionClass, metric: Metric | None, x_tree: LabeledTree, alpha) -> int:
    """Exact minimum sequential cover with grid-valued trees, by exhaustive set cover."""
    n = x_tree.depth
    nodes = (1 << n) - 1
    size = cls.grid.size
    if n > BRUTE_MAX_DEPTH or cls.n_functions > BRUTE_MAX_FUNCTIONS or size**nodes > BRUTE_MAX_TREES:
        raise CapExceeded(
            f"brute force limited to depth <= {BRUTE_MAX_DEPTH}, |F| <= {BRUTE_MAX_FUNCTIONS} "
            f"and at most {BRUTE_MAX_TREES} candidate trees"
        )
    if n == 0:
        return 1
    alphabet = np.arange(cls.grid.lo, cls.grid.hi + 1, dtype=np.int64)
    grids = np.meshgrid(*([alphabet] * nodes), indexing="ij")
    tv = np.stack([g.reshape(-1) for g in grids], axis=1)
    cov = _coverage_matrix(cls, metric, x_tree, alpha, tv)
    flat = cov.reshape(cov.shape[0], -1)
    packed = np.packbits(flat, axis=1, bitorder="little")
    masks = {int.from_bytes(row.tobytes(), "little") for row in packed}
    masks.discard(0)
    universe = (1 << flat.shape[1]) - 1
    return _min_set_cover(sorted(masks, key=lambda m: -m.bit_count()), universe)


def _min_set_cover(masks: list[int], universe: int) -> int:
    maximal: list[int] = []
    for m in masks:
        if not any(m & ~k == 0 for k in maximal):
            maximal.append(m)
    by_elem: dict[int, list[int]] = {}
    rest = universe
    while rest:
        low = rest & -rest
        e = low.bit_length() - 1
        by_elem[e] = [m for m in maximal if m >> e & 1]
        rest ^= low
    if any(not v for v in by_elem.values()):
        raise ValueError("some (function, path) pair cannot be covered")
    biggest = max(m.bit_count() for m in maximal)
    best = math.inf

    def rec(covered: int, used: int):
        nonlocal best
        if covered == universe:
            best = min(best, used)
            return
        remaining = (universe & ~covered).bit_count()
        if used + -(-remaining // biggest) >= best:
            return
        uncovered = universe & ~covered
        e = min(
            (i for i in by_elem if uncovered >> i & 1),
            key=lambda i: len(by_elem[i]),
        )
        for m in by_elem[e]:
            rec(covered | m, used + 1)

    rec(0, 0)
    return int(best)
