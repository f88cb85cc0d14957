"""Acceptance criteria, one test each; every test records a PASS/FAIL line for the summary."""

import itertools
import math
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import ACCEPTANCE_LINES
from dimlab.constructions import interval_product_class, log_gap_class_nonseq, random_class, single_point_grid_class
from dimlab.core import FunctionClass, LABEL_POINT, LabeledTree, Metric, ValueGrid
from dimlab.harness import checkers
from dimlab.harness import corpus as corpus_mod
from dimlab.harness.cli import run_verify
from dimlab.harness.report import FAIL, PASS, SKIPPED, summary
from dimlab.nonseq_cover import cover_min_exact, packing_max_exact
from dimlab.nonseq_dims import FAT, FIXED, GAPPED_INTEGER, GAPPED_REAL, dimension, gapped_dim_real, fat_dim
from dimlab.oracles import oracle_cover_min, oracle_nonseq_dim, oracle_packing_max, oracle_seq_dim
from dimlab.rademacher import (
    MAX_EXACT_N,
    block_length,
    block_schedule_length,
    build_block_design_nonseq,
    build_block_tree_seq,
    offset_rad_nonseq_exact,
    offset_rad_seq_exact,
)
from dimlab.rng import SplitMix64
from dimlab.sequential import (
    SeqSolver,
    is_seq_cover,
    seq_cover_construct,
    seq_cover_min_bruteforce,
    seq_dimension,
    seq_gapped_dim_real,
    sfat_dim,
)


@contextmanager
def criterion(number, title, budget_s):
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL {number}. {title}: {type(exc).__name__}: {exc}"[:300])
        print(ACCEPTANCE_LINES[-1])
        raise
    elapsed = time.perf_counter() - start
    info = ", ".join(f"{k}={v}" for k, v in detail.items())
    ok = elapsed < budget_s
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {number}. {title} ({info}; {elapsed:.1f}s of {budget_s}s)")
    print(ACCEPTANCE_LINES[-1])
    assert ok, f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s"


def test_1_log_gap_class():
    with criterion(1, "log-gap class: gapped dimension 1, fat dimension >= log2(1/alpha)", 10) as info:
        for alpha in (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)):
            cls = log_gap_class_nonseq(alpha, Q=4 * alpha.denominator)
            d = gapped_dim_real(cls, alpha=alpha, beta=alpha / 4)[0]
            f = fat_dim(cls, alpha)[0]
            assert d == 1, (alpha, d)
            assert f >= math.floor(math.log2(1 / alpha)), (alpha, f)
            info[f"fat@{alpha}"] = f


def test_2_single_point_class():
    with criterion(2, "single point class: sequential gapped dimension 1, sfat >= log2(1/alpha)", 30) as info:
        for alpha in (Fraction(1, 4), Fraction(1, 8)):
            cls = single_point_grid_class(alpha, denominator=4 * alpha.denominator)
            d = seq_gapped_dim_real(cls, alpha=alpha, beta=alpha / 4)[0]
            s = sfat_dim(cls, alpha)[0]
            assert d == 1, (alpha, d)
            assert s >= math.floor(math.log2(1 / alpha)), (alpha, s)
            info[f"sfat@{alpha}"] = s


def _block_classes():
    """Interval products with gaps 1/2 or 1, plus random mixtures with shifted centres and extra rows."""
    out = []
    for d in range(1, 5):
        out.append((interval_product_class([("-1/4", "1/4")] * d, 8, step=Fraction(1, 2)), Fraction(1, 2)))
    for d in range(1, 7):
        out.append((interval_product_class([("-1/2", "1/2")] * d, 8, step=Fraction(1)), Fraction(1)))
    for seed in range(15):
        rng = SplitMix64(9000 + seed)
        gaps = []
        while not gaps or (len(gaps) < 6 and rng.below(3)):
            gaps.append((Fraction(1, 2), Fraction(1))[rng.below(2)])
        while sum(block_length(g) for g in gaps) > MAX_EXACT_N:
            gaps.pop()
        intervals = []
        for g in gaps:
            c = Fraction(rng.below(5) - 2, 8)
            intervals.append((c - g / 2, c + g / 2))
        corners = list(itertools.product(*[(int(lo * 8), int(hi * 8)) for lo, hi in intervals]))
        extra = [tuple(rng.below(17) - 8 for _ in gaps) for _ in range(3)]
        out.append((FunctionClass(ValueGrid.real(8), tuple(corners + extra)), min(gaps)))
    return out


def test_3_block_lower_bounds():
    with criterion(3, "block constructions meet (d-1)/50 - 4 and d/50 at C = 2", 300) as info:
        certs = 0
        max_d = 0
        for cls, alpha in _block_classes():
            beta = alpha / 4
            d, cert = gapped_dim_real(cls, alpha=alpha, beta=beta)
            assert 1 <= d <= 6
            n = sum(block_length(w.gap) for w in cert.witnesses)
            assert n <= MAX_EXACT_N
            val = offset_rad_nonseq_exact(build_block_design_nonseq(cert, cls, n, 2))
            assert val >= Fraction(d - 1, 50) - 4, (d, val)
            tcert = SeqSolver(GAPPED_REAL, cls, alpha, beta).certificate()
            assert 1 <= tcert.d <= 6
            m = block_schedule_length(tcert)
            assert m <= MAX_EXACT_N
            tval = offset_rad_seq_exact(build_block_tree_seq(tcert, cls, m, 2))
            assert tval >= Fraction(tcert.d, 50), (tcert.d, tval)
            certs += 1
            max_d = max(max_d, d, tcert.d)
        assert certs >= 20
        info.update(certificates=certs, max_d=max_d)


def _oracle_class(seed):
    rng = SplitMix64(seed)
    nf, nx = 2 + rng.below(9), 1 + rng.below(4)
    if seed % 2:
        return random_class(nf, nx, ValueGrid.integer(2 + rng.below(3)), seed)
    return random_class(nf, nx, ValueGrid.real((2, 4)[rng.below(2)]), seed)


def _trees(cls, seed):
    rng = SplitMix64(seed + 1)
    for depth in (1, 2, 3):
        yield LabeledTree.constant([rng.below(cls.n_points) for _ in range(depth)], LABEL_POINT)
        yield LabeledTree(depth, tuple(rng.below(cls.n_points) for _ in range((1 << depth) - 1)), LABEL_POINT)


def _check_oracles(cls, seed):
    design = tuple(range(cls.n_points))
    checks = 0
    if cls.grid.Q == 1:
        metric = Metric.tabulated([[0, 1, 3], [1, 0, 2], [3, 2, 0]]) if cls.grid.M == 3 and seed % 4 == 1 else None
        for alpha in range(1, cls.grid.hi if metric is None else 4):
            assert dimension(GAPPED_INTEGER, cls, alpha, None, metric)[0] == oracle_nonseq_dim(
                GAPPED_INTEGER, cls, alpha, None, metric)
            assert seq_dimension(GAPPED_INTEGER, cls, alpha, None, metric)[0] == oracle_seq_dim(
                GAPPED_INTEGER, cls, alpha, None, metric)
            checks += 2
        covers = [0] + list(range(1, cls.grid.hi if metric is None else 4))
    else:
        Q = cls.grid.Q
        metric = None
        alphas = [Fraction(k, Q) for k in range(1, 2 * Q + 1)]
        for alpha in alphas:
            if (alpha * Q / 2).denominator == 1:
                for kind in (FAT, FIXED):
                    assert dimension(kind, cls, alpha)[0] == oracle_nonseq_dim(kind, cls, alpha, refine=2)
                    checks += 1
                assert sfat_dim(cls, alpha)[0] == oracle_seq_dim(FAT, cls, alpha, refine=2)
                checks += 1
            for beta in (Fraction(1, Q),):
                assert dimension(GAPPED_REAL, cls, alpha, beta)[0] == oracle_nonseq_dim(GAPPED_REAL, cls, alpha, beta,
                                                                                         refine=2)
                checks += 1
                if 2 * beta < alpha:
                    assert seq_dimension(GAPPED_REAL, cls, alpha, beta)[0] == oracle_seq_dim(
                        GAPPED_REAL, cls, alpha, beta, refine=2)
                    checks += 1
        covers = [Fraction(0)] + alphas
    for alpha in covers:
        assert cover_min_exact(cls, design, metric, alpha)[0] == oracle_cover_min(cls, design, metric, alpha)
        assert packing_max_exact(cls, design, metric, alpha)[0] == oracle_packing_max(cls, design, metric, alpha)
        checks += 2
    if cls.grid.Q == 1 and cls.n_functions <= 8:
        for xt in _trees(cls, seed):
            for alpha in range(1, cls.grid.hi):
                best = seq_cover_min_bruteforce(cls, None, xt, alpha)
                built = seq_cover_construct(cls, None, xt, alpha)
                assert is_seq_cover(cls, None, xt, alpha, built) and best <= len(built)
                if xt.is_constant_level():
                    flat = tuple(xt.level(t)[0] for t in range(1, xt.depth + 1))
                    assert best == oracle_cover_min(cls, flat, None, alpha)
                checks += 1
    return checks


def test_4_oracle_equivalence():
    with criterion(4, "200 random classes: every dimension and cover equals its brute-force oracle", 600) as info:
        checks = sum(_check_oracles(_oracle_class(10_000 + s), 10_000 + s) for s in range(200))
        info.update(classes=200, comparisons=checks)


def test_5_verify_all():
    with criterion(5, "verify --all on the shipped corpus has zero failures", 900) as info:
        reports = run_verify(list(checkers.REGISTRY))
        counts = summary(reports)
        covered = {r.theorem_id for r in reports}
        info.update(**counts, checkers=len(covered))
        failed = [f"{r.theorem_id}/{r.instance}" for r in reports if r.verdict == FAIL]
        assert not failed, failed[:10]
        assert covered == set(checkers.REGISTRY)


def test_6_convex_closures():
    with criterion(6, "convex closures: fixed-scale = fat dimension, at most 20% skipped", 600) as info:
        corpus = corpus_mod.load()
        entries = corpus.tagged("convex")
        assert len(entries) >= 10
        reports = [r for e in entries for r in checkers.run_target(corpus, "prop-a.1", e.name)]
        counts = summary(reports)
        info.update(classes=len(entries), **counts)
        assert counts[FAIL] == 0
        assert all(r.reason == "averaging step off-grid" for r in reports if r.verdict == SKIPPED)
        assert counts[SKIPPED] <= 0.2 * len(reports)
        assert all(r.relation == "==" for r in reports if r.verdict == PASS)


def test_7_determinism(tmp_path):
    with criterion(7, "two consecutive verify --all runs give byte-identical reports", 900) as info:
        outs = []
        for i in range(2):
            path = tmp_path / f"run{i}.json"
            proc = subprocess.run([sys.executable, "-m", "dimlab.harness.cli", "verify", "--all", "--out", str(path)],
                                  capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        info.update(bytes=len(outs[0]))
