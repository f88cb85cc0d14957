"""Registered inequality checkers.

Each checker maps corpus entries to verdicts.  Exact quantities are compared
as rationals; bounds involving logarithms are compared in floating point with
a fixed slack, and both sides are recorded.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..combinatorics import g_M, khintchine_abs_mean, sign_patterns
from ..core import (
    INTEGER,
    LABEL_POINT,
    LABEL_VALUE,
    CapExceeded,
    FunctionClass,
    LabeledTree,
    Metric,
    ValueGrid,
    format_fraction,
)
from ..games import DEFAULT_GRID, GameConfig, minimax_online_seq, minimax_transductive
from ..nonseq_cover import cover_min_exact, packing_max_exact
from ..nonseq_dims import fat_dim, fixed_scale_dim, gapped_dim_integer, gapped_dim_real
from ..rademacher import (
    MAX_EXACT_N,
    OffsetInstance,
    block_length,
    block_schedule_length,
    build_block_design_nonseq,
    build_block_tree_seq,
    offset_rad_nonseq_exact,
    offset_rad_seq_exact,
)
from ..rng import SplitMix64
from ..sequential import (
    FAT,
    GAPPED_INTEGER,
    GAPPED_REAL,
    SeqSolver,
    is_seq_cover,
    seq_cover_construct,
    seq_cover_min_bruteforce,
)
from .corpus import Corpus, Entry
from .report import FAIL, FLOAT_SLACK, PASS, SKIPPED, VerdictReport, fingerprint

GLOBAL = "__global__"
HALF_GRID = tuple(Fraction(k, 2) for k in range(-2, 3))


@dataclass
class Outcome:
    params: dict
    lhs: object
    relation: str
    rhs: object
    verdict: str
    reason: str | None = None
    slack: float | None = None
    extra: dict | None = None


def _fs(x) -> str:
    return format_fraction(Fraction(x))


def exact(params, lhs, relation, rhs, extra=None) -> Outcome:
    ok = {"<=": lhs <= rhs, ">=": lhs >= rhs, "==": lhs == rhs}[relation]
    return Outcome(params, _fs(lhs), relation, _fs(rhs), PASS if ok else FAIL, extra=extra)


def guarded(params, lhs: float, relation, rhs: float, extra=None) -> Outcome:
    ok = lhs <= rhs + FLOAT_SLACK if relation == "<=" else lhs + FLOAT_SLACK >= rhs
    return Outcome(params, float(lhs), relation, float(rhs), PASS if ok else FAIL, slack=FLOAT_SLACK, extra=extra)


def skipped(params, reason, lhs=None, rhs=None, relation="==", extra=None) -> Outcome:
    return Outcome(params, lhs, relation, rhs, SKIPPED, reason=reason, extra=extra)


# ---------------------------------------------------------------------------
# scale helpers


def _fat_ok(cls: FunctionClass, alpha) -> bool:
    return alpha > 0 and cls.grid.representable(Fraction(alpha) / 2)


def _real_pairs(entry: Entry, strict: bool = True):
    """(alpha, beta) pairs on the grid, with ``2 beta < alpha`` when ``strict``."""
    cls = entry.cls
    for a in entry.scales():
        for b in entry.margins():
            if not (cls.grid.representable(a) and cls.grid.representable(b)) or b <= 0:
                continue
            if strict and not 2 * b < a:
                continue
            yield a, b


def _trees(entry: Entry, max_depth: int = 3) -> list[LabeledTree]:
    """A constant-level tree over the first points and one seeded arbitrary tree."""
    p = entry.cls.n_points
    depth = min(max_depth, int(entry.params.get("tree_depth", max_depth)))
    const = LabeledTree.constant([t % p for t in range(depth)], LABEL_POINT)
    rng = SplitMix64(int(entry.params.get("tree_seed", 0)))
    free = LabeledTree(depth, tuple(rng.below(p) for _ in range((1 << depth) - 1)), LABEL_POINT)
    return [const, free] if free != const else [const]


def _tree_params(tree: LabeledTree) -> dict:
    return {"x_tree": list(tree.labels), "depth": tree.depth}


# ---------------------------------------------------------------------------
# non-sequential dimension and cover statements


def check_lemma_2_3(entry: Entry):
    cls, metric = entry.cls, entry.metric
    n, M = cls.n_points, cls.grid.M
    design = tuple(range(n))
    for a in entry.scales():
        N, _ = cover_min_exact(cls, design, metric, a)
        d, _ = gapped_dim_integer(cls, metric, a)
        rhs = 16 * d * math.log(math.e * n * M) ** 2
        yield guarded({"alpha": _fs(a)}, math.log(N), "<=", rhs, {"cover": N, "d": d})


def check_prop_2_5(entry: Entry):
    cls = entry.cls
    n = cls.n_points
    design = tuple(range(n))
    for a, b in _real_pairs(entry, strict=False):
        N, _ = cover_min_exact(cls, design, None, a + b)
        d, _ = gapped_dim_real(cls, None, a, b)
        rhs = 16 * d * math.log(2 * math.e * n / b) ** 2
        yield guarded({"alpha": _fs(a), "beta": _fs(b)}, math.log(N), "<=", rhs, {"cover": N, "d": d})


def check_prop_2_7(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry):
        if not _fat_ok(cls, a - 2 * b):
            continue
        d, _ = gapped_dim_real(cls, None, a, b)
        v, _ = fat_dim(cls, a - 2 * b)
        yield exact({"alpha": _fs(a), "beta": _fs(b)}, d, "<=", v)


def check_prop_2_8(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry, strict=False):
        big = 3 * (a + b)
        if big > 2 or not _fat_ok(cls, big):
            continue
        d, _ = gapped_dim_real(cls, None, a, b)
        v, _ = fat_dim(cls, big)
        rhs = 288 * d * math.log(384 * d / b) ** 2 if d else 0.0
        yield guarded({"alpha": _fs(a), "beta": _fs(b)}, float(v), "<=", rhs, {"fat": v, "d": d})


def check_prop_2_8_convex(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry):
        if not _fat_ok(cls, a):
            continue
        v, _ = fat_dim(cls, a)
        d, _ = gapped_dim_real(cls, None, a, b)
        yield exact({"alpha": _fs(a), "beta": _fs(b)}, v, "<=", d)


def check_prop_2_9(entry: Entry):
    cls = entry.cls
    a = Fraction(entry.params["alpha"])
    for b in entry.margins():
        if 2 * b < a and cls.grid.representable(b):
            d, _ = gapped_dim_real(cls, None, a, b)
            yield exact({"alpha": _fs(a), "beta": _fs(b), "claim": "gapped=1"}, d, "==", 1)
    v, _ = fat_dim(cls, a)
    yield exact({"alpha": _fs(a), "claim": "fat>=log"}, v, ">=", math.floor(math.log2(1 / a)))


def averaging_images(cls: FunctionClass, cert, alpha: Fraction):
    """Run the coordinate-by-coordinate averaging that turns fat shattering into fixed-scale shattering.

    Returns ``(rows, reason)``: the final functions as numerator tuples, or
    ``None`` with the reason when an intermediate mixture leaves the class.
    """
    d = cert.d
    grid = cls.grid
    members = set(cls.values)
    rows = {eps: [grid.value(v) for v in cls.values[cert.realizer(eps)]] for eps in sign_patterns(d)}
    for i in range(d):
        x, s = cert.points[i], cert.witnesses[i].lo
        new = {}
        for eps, f in rows.items():
            g = rows[eps[:i] + (-eps[i],) + eps[i + 1:]]
            target = s + eps[i] * alpha / 2
            lam = (target - g[x]) / (f[x] - g[x])
            new[eps] = [lam * u + (1 - lam) * w for u, w in zip(f, g)]
        rows = new
        for f in rows.values():
            if not all(grid.representable(u) for u in f):
                return None, "off-grid"
            if tuple(grid.numerator(u) for u in f) not in members:
                return None, "outside the closure"
    return {eps: tuple(grid.numerator(u) for u in f) for eps, f in rows.items()}, None


def check_prop_a_1(entry: Entry):
    cls = entry.cls
    for a in entry.scales():
        if not _fat_ok(cls, a):
            continue
        v, cert = fat_dim(cls, a)
        w, _ = fixed_scale_dim(cls, a)
        params = {"alpha": _fs(a)}
        if v == w:
            yield exact(params, w, "==", v)
            continue
        images, reason = averaging_images(cls, cert, a)
        if images is None:
            yield skipped(params, f"averaging step {reason}", _fs(w), _fs(v))
        else:
            yield exact(params, w, "==", v, {"note": "averaging stays in the class"})


def check_cover_packing(entry: Entry):
    cls, metric = entry.cls, entry.metric
    design = tuple(range(cls.n_points))
    for a in entry.scales():
        if cls.grid.kind != INTEGER and not cls.grid.representable(a):
            continue
        N, _ = cover_min_exact(cls, design, metric, a)
        P, _ = packing_max_exact(cls, design, metric, a)
        yield exact({"alpha": _fs(a)}, N, "<=", P)


# ---------------------------------------------------------------------------
# sequential statements


def check_lemma_3_3(entry: Entry):
    cls, metric = entry.cls, entry.metric
    M = cls.grid.M
    for a in entry.scales():
        d = SeqSolver(GAPPED_INTEGER, cls, a, None, metric).dim()
        for tree in _trees(entry):
            cover = seq_cover_construct(cls, metric, tree, a)
            params = {"alpha": _fs(a), **_tree_params(tree)}
            if not is_seq_cover(cls, metric, tree, a, cover.trees):
                yield Outcome({**params, "form": "count"}, len(cover), "<=", g_M(tree.depth, d, M), FAIL,
                              reason="constructed trees do not cover")
                continue
            yield exact({**params, "form": "count"}, len(cover), "<=", g_M(tree.depth, d, M), {"d": d})
            n = tree.depth
            rhs = d * math.log(math.e * n * M) if n else 0.0
            yield guarded({**params, "form": "log"}, math.log(len(cover)), "<=", rhs, {"d": d})


def beta_net(beta: Fraction) -> list[Fraction]:
    """Increasing points of [-1, 1] spaced ``2 beta`` apart, every value within ``beta`` of one."""
    m = math.ceil(1 / beta)
    return [min(-1 + (2 * i - 1) * beta, Fraction(1)) for i in range(1, m + 1)]


def discretize(cls: FunctionClass, beta: Fraction):
    """Round every value to its nearest net point; the integer class carries the induced metric."""
    net = beta_net(beta)
    grid = ValueGrid.integer(len(net))
    rows = []
    for row in cls.values:
        out = []
        for v in row:
            u = cls.grid.value(v)
            out.append(1 + min(range(len(net)), key=lambda i: (abs(net[i] - u), i)))
        rows.append(tuple(out))
    metric = Metric.tabulated([[abs(p - q) for q in net] for p in net])
    return FunctionClass(grid, tuple(rows), cls.domain), metric, net


def check_prop_3_5(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry):
        if b >= 1 or not cls.grid.representable(a + b):
            continue
        d = SeqSolver(GAPPED_REAL, cls, a, b).dim()
        disc, metric, net = discretize(cls, b)
        d_disc = SeqSolver(GAPPED_INTEGER, disc, a, None, metric).dim()
        for tree in _trees(entry):
            cover = seq_cover_construct(disc, metric, tree, a)
            real_trees = [LabeledTree(t.depth, tuple(net[int(v) - 1] for v in t.labels), LABEL_VALUE)
                          for t in cover.trees]
            params = {"alpha": _fs(a), "beta": _fs(b), **_tree_params(tree)}
            n = tree.depth
            rhs = d * math.log(2 * math.e * n / b) if n else 0.0
            extra = {"d_seq": d, "d_discretized": d_disc, "cover": len(cover)}
            if not is_seq_cover(cls, None, tree, a + b, real_trees):
                yield Outcome(params, math.log(len(cover)), "<=", rhs, FAIL, reason="mapped trees do not cover",
                              extra=extra)
                continue
            yield guarded(params, math.log(len(cover)), "<=", rhs, extra)


def check_d_less_f(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry):
        if not _fat_ok(cls, a - 2 * b):
            continue
        d = SeqSolver(GAPPED_REAL, cls, a, b).dim()
        v = SeqSolver(FAT, cls, a - 2 * b).dim()
        yield exact({"alpha": _fs(a), "beta": _fs(b)}, d, "<=", v)


def check_f_less_d(entry: Entry):
    cls = entry.cls
    for a, b in _real_pairs(entry):
        big = 3 * (a + b)
        if big > 2 or not _fat_ok(cls, big):
            continue
        d = SeqSolver(GAPPED_REAL, cls, a, b).dim()
        if d == 0:
            continue
        v = SeqSolver(FAT, cls, big).dim()
        yield guarded({"alpha": _fs(a), "beta": _fs(b)}, float(v), "<=", 4 * d * math.log(12 * d / b),
                      {"sfat": v, "d_seq": d})


def check_prop_3_9(entry: Entry):
    cls = entry.cls
    a = Fraction(entry.params["alpha"])
    for b in entry.margins():
        if 2 * b < a and cls.grid.representable(b):
            d = SeqSolver(GAPPED_REAL, cls, a, b).dim()
            yield exact({"alpha": _fs(a), "beta": _fs(b), "claim": "gapped=1"}, d, "==", 1)
    v = SeqSolver(FAT, cls, a).dim()
    yield exact({"alpha": _fs(a), "claim": "sfat>=log"}, v, ">=", math.floor(math.log2(1 / a)))


def check_const_tree(entry: Entry):
    cls, metric = entry.cls, entry.metric
    if cls.grid.kind == INTEGER:
        for a in entry.scales():
            s = SeqSolver(GAPPED_INTEGER, cls, a, None, metric).dim()
            d, _ = gapped_dim_integer(cls, metric, a)
            yield exact({"alpha": _fs(a), "kind": "gapped-integer"}, s, ">=", d)
    else:
        for a, b in _real_pairs(entry):
            s = SeqSolver(GAPPED_REAL, cls, a, b).dim()
            d, _ = gapped_dim_real(cls, None, a, b)
            yield exact({"alpha": _fs(a), "beta": _fs(b), "kind": "gapped-real"}, s, ">=", d)
        for a in entry.scales():
            if _fat_ok(cls, a):
                yield exact({"alpha": _fs(a), "kind": "fat"}, SeqSolver(FAT, cls, a).dim(), ">=", fat_dim(cls, a)[0])
    if "tiny" not in entry.tags:
        return
    for depth in (1, 2, 3):
        if cls.grid.size ** ((1 << depth) - 1) > 16384:
            break
        design = tuple(t % cls.n_points for t in range(depth))
        tree = LabeledTree.constant(design, LABEL_POINT)
        for a in entry.scales():
            if cls.grid.kind != INTEGER and not cls.grid.representable(a):
                continue
            brute = seq_cover_min_bruteforce(cls, metric, tree, a)
            N, _ = cover_min_exact(cls, design, metric, a)
            yield exact({"alpha": _fs(a), "kind": "cover", "design": list(design)}, brute, "==", N)


def check_seq_packing(entry: Entry):
    cls, metric = entry.cls, entry.metric
    if cls.grid.kind == INTEGER:
        return
    for a in entry.scales():
        if not _fat_ok(cls, a):
            continue
        cert = SeqSolver(FAT, cls, a).certificate()
        d = cert.d
        if d == 0 or cls.grid.size ** ((1 << d) - 1) > 16384 or d > 3:
            continue
        brute = seq_cover_min_bruteforce(cls, metric, cert.x_tree, a / 3)
        yield exact({"alpha": _fs(a), "x_tree": list(cert.x_tree.labels)}, brute, ">=", 2**d)


# ---------------------------------------------------------------------------
# offset Rademacher lower-bound constructions and games


def _block_scale(entry: Entry):
    return Fraction(entry.params["alpha"]), Fraction(entry.params["beta"]), Fraction(entry.params.get("C", 2))


def check_thm_2_10(entry: Entry):
    cls = entry.cls
    a, b, C = _block_scale(entry)
    d, cert = gapped_dim_real(cls, None, a, b)
    params = {"alpha": _fs(a), "beta": _fs(b), "C": _fs(C)}
    if d == 0:
        yield skipped(params, "no shattered point at this scale")
        return
    ks = [block_length(w.gap) for w in cert.witnesses]
    for extra_rounds in (0, 2):
        n = sum(ks) + extra_rounds
        if n > MAX_EXACT_N:
            continue
        inst = build_block_design_nonseq(cert, cls, n, C)
        val = offset_rad_nonseq_exact(inst)
        yield exact({**params, "n": n}, val, ">=", Fraction(d - 1, 50) - 4, {"d": d, "blocks": ks})


def check_thm_3_8(entry: Entry):
    cls = entry.cls
    a, b, C = _block_scale(entry)
    cert = SeqSolver(GAPPED_REAL, cls, a, b).certificate()
    params = {"alpha": _fs(a), "beta": _fs(b), "C": _fs(C)}
    if cert.d == 0:
        yield skipped(params, "no shattered tree at this scale")
        return
    n = block_schedule_length(cert)
    if n > MAX_EXACT_N:
        yield skipped({**params, "n": n}, f"schedule length exceeds {MAX_EXACT_N}")
        return
    val = offset_rad_seq_exact(build_block_tree_seq(cert, cls, n, C))
    yield exact({**params, "n": n}, val, ">=", Fraction(cert.d, 50), {"d": cert.d})


def check_lemma_2_11(entry: Entry):
    cls = entry.cls
    n_max = int(entry.params.get("n_max", 3))
    for n in range(1, n_max + 1):
        for design in itertools.product(range(cls.n_points), repeat=n):
            V = minimax_transductive(GameConfig(cls, n, x_order=design))
            best, arg = None, None
            for mu in itertools.product(HALF_GRID, repeat=n):
                val = offset_rad_nonseq_exact(OffsetInstance(cls, 2, design=design, mu=mu))
                if best is None or val > best:
                    best, arg = val, mu
            yield exact({"design": list(design)}, V, ">=", best, {"mu": [_fs(m) for m in arg]})


def _grid_with(mus) -> tuple:
    extra = {m + s for m in mus for s in (-1, 1)}
    return tuple(sorted(set(DEFAULT_GRID) | {v for v in extra if -2 <= v <= 2}))


def check_cor_2_12(entry: Entry):
    cls = entry.cls
    a, b, C = _block_scale(entry)
    d, cert = gapped_dim_real(cls, None, a, b)
    params = {"alpha": _fs(a), "beta": _fs(b)}
    if d == 0:
        yield skipped(params, "no shattered point at this scale")
        return
    n = sum(block_length(w.gap) for w in cert.witnesses)
    if n > 3:
        yield skipped({**params, "n": n}, "game horizon above 3")
        return
    inst = build_block_design_nonseq(cert, cls, n, 2)
    off = offset_rad_nonseq_exact(inst)
    V = minimax_transductive(GameConfig(cls, n, y_grid=_grid_with(inst.mu), x_order=inst.design))
    yield exact({**params, "n": n, "step": "game>=offset"}, V, ">=", off)
    yield exact({**params, "n": n, "step": "offset>=bound"}, off, ">=", Fraction(d - 1, 50) - 4)


def check_cor_3_10(entry: Entry):
    cls = entry.cls
    a, b, C = _block_scale(entry)
    cert = SeqSolver(GAPPED_REAL, cls, a, b).certificate()
    params = {"alpha": _fs(a), "beta": _fs(b)}
    if cert.d == 0:
        yield skipped(params, "no shattered tree at this scale")
        return
    n = block_schedule_length(cert)
    if n > 3:
        yield skipped({**params, "n": n}, "game horizon above 3")
        return
    inst = build_block_tree_seq(cert, cls, n, 2)
    off = offset_rad_seq_exact(inst)
    V = minimax_online_seq(GameConfig(cls, n, y_grid=_grid_with(inst.mu_tree.labels)))
    yield exact({**params, "n": n, "step": "game>=offset"}, V, ">=", off)
    yield exact({**params, "n": n, "step": "offset>=bound"}, off, ">=", Fraction(cert.d, 50))


# ---------------------------------------------------------------------------
# counting facts


def check_g_recurrence(corpus: Corpus):
    for M in corpus.g_M:
        for n in range(1, corpus.g_max_n + 1):
            for d in range(1, n + 1):
                rhs = g_M(n - 1, d, M) + (M - 1) * g_M(n - 1, d - 1, M)
                yield exact({"n": n, "d": d, "M": M}, g_M(n, d, M), "==", rhs)


def check_g_bound(corpus: Corpus):
    for M in corpus.g_M:
        for n in range(1, corpus.g_max_n + 1):
            for d in range(1, n + 1):
                yield guarded({"n": n, "d": d, "M": M}, math.log(g_M(n, d, M)), "<=",
                              d * math.log(math.e * n * M / d))


def check_khintchine(corpus: Corpus):
    for k in range(1, corpus.khintchine_max_k + 1):
        yield exact({"k": k}, khintchine_abs_mean(k) ** 2, ">=", Fraction(1, 2 * k))


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Checker:
    theorem_id: str
    title: str
    tags: tuple[str, ...] | None
    fn: Callable

    def targets(self, corpus: Corpus) -> list[str]:
        if self.tags is None:
            return [GLOBAL]
        return [e.name for e in corpus.entries if any(t in e.tags for t in self.tags)]


REGISTRY: dict[str, Checker] = {c.theorem_id: c for c in [
    Checker("lemma-2.3", "integer cover size vs gapped dimension (16 d log^2(enM))", ("integer",), check_lemma_2_3),
    Checker("prop-2.5", "real cover size at alpha+beta vs gapped dimension", ("real",), check_prop_2_5),
    Checker("prop-2.7", "gapped dimension <= fat dimension at alpha - 2 beta", ("real",), check_prop_2_7),
    Checker("prop-2.8", "fat dimension at 3(alpha+beta) vs gapped dimension", ("real",), check_prop_2_8),
    Checker("prop-2.8-convex", "fat dimension <= gapped dimension on convex closures", ("convex",),
            check_prop_2_8_convex),
    Checker("prop-2.9", "log-gap class: gapped dimension 1, fat dimension >= log2(1/alpha)", ("log-gap",),
            check_prop_2_9),
    Checker("thm-2.10-const", "block design offset value >= (d-1)/50 - 4", ("block",), check_thm_2_10),
    Checker("lemma-2.11", "transductive game value >= offset value at grid centres", ("game",), check_lemma_2_11),
    Checker("cor-2.12", "transductive game >= block design offset >= bound", ("game-block",), check_cor_2_12),
    Checker("lemma-3.3", "constructed sequential cover size <= g_M(n, d_seq)", ("integer",), check_lemma_3_3),
    Checker("prop-3.5", "sequential cover at alpha+beta via beta-net discretization", ("real",), check_prop_3_5),
    Checker("prop-d-less-f", "sequential gapped dimension <= sfat at alpha - 2 beta", ("real",), check_d_less_f),
    Checker("prop-f-less-d", "sfat at 3(alpha+beta) <= 4 d log(12 d / beta)", ("real",), check_f_less_d),
    Checker("prop-3.9", "single point: sequential gapped dimension 1, sfat >= log2(1/alpha)", ("single-point",),
            check_prop_3_9),
    Checker("thm-3.8-const", "block tree offset value >= d/50", ("block",), check_thm_3_8),
    Checker("cor-3.10", "online game >= block tree offset >= bound", ("game-block",), check_cor_3_10),
    Checker("prop-a.1", "fixed-scale dimension = fat dimension on convex closures", ("convex",), check_prop_a_1),
    Checker("const-tree", "constant-level trees: sequential >= non-sequential, covers agree",
            ("integer", "real"), check_const_tree),
    Checker("cover-packing", "minimum cover <= maximum packing", ("integer", "real"), check_cover_packing),
    Checker("seq-packing", "sfat-shattered trees need >= 2^d trees at alpha/3", ("tiny",), check_seq_packing),
    Checker("g-recurrence", "g_M(n,d) = g_M(n-1,d) + (M-1) g_M(n-1,d-1)", None, check_g_recurrence),
    Checker("g-bound", "g_M(n,d) <= (enM/d)^d", None, check_g_bound),
    Checker("khintchine", "E|mean of k signs|^2 >= 1/(2k)", None, check_khintchine),
]}


def run_target(corpus: Corpus, theorem_id: str, target: str) -> list[VerdictReport]:
    """All verdicts of one checker on one corpus entry (or on the corpus-level parameters)."""
    checker = REGISTRY[theorem_id]
    start = time.perf_counter()
    if target == GLOBAL:
        name, payload = GLOBAL, {"khintchine_max_k": corpus.khintchine_max_k, "g_max_n": corpus.g_max_n,
                                 "g_M": list(corpus.g_M)}
        outcomes = list(checker.fn(corpus))
    else:
        entry = next(e for e in corpus.entries if e.name == target)
        name, payload = entry.name, entry.describe()
        try:
            outcomes = list(checker.fn(entry))
        except CapExceeded as exc:
            outcomes = [skipped({}, f"cap exceeded: {exc}")]
    elapsed = (time.perf_counter() - start) * 1000
    reports = []
    for o in outcomes:
        reports.append(VerdictReport(
            theorem_id=theorem_id,
            instance=name,
            instance_fingerprint=fingerprint(theorem_id, {"instance": payload, "params": o.params}),
            params=o.params,
            lhs=o.lhs,
            relation=o.relation,
            rhs=o.rhs,
            verdict=o.verdict,
            reason=o.reason,
            slack=o.slack,
            extra=o.extra or {},
            runtime_ms=elapsed / max(len(outcomes), 1),
        ))
    return reports
