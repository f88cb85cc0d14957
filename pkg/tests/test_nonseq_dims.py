import math
from fractions import Fraction

import pytest

from dimlab.constructions import convexify, full_class, interval_product_class, log_gap_class_nonseq, random_class
from dimlab.core import FunctionClass, Metric, ValueGrid, WitnessPair
from dimlab.nonseq_dims import (
    FAT,
    FIXED,
    GAPPED_INTEGER,
    GAPPED_REAL,
    fat_dim,
    fixed_scale_dim,
    gapped_dim_integer,
    gapped_dim_real,
    is_shattered_nonseq,
)
from dimlab.oracles import oracle_nonseq_dim

H = Fraction(1, 2)
Q4 = Fraction(1, 4)


def test_singletons_have_dimension_zero():
    one_int = FunctionClass(ValueGrid.integer(3), ((1, 2),))
    one_real = FunctionClass(ValueGrid.real(4), ((1, -2),))
    assert gapped_dim_integer(one_int, alpha=1)[0] == 0
    assert gapped_dim_real(one_real, alpha=Fraction(3, 4), beta=Q4)[0] == 0
    assert fat_dim(one_real, H)[0] == 0
    assert fixed_scale_dim(one_real, H)[0] == 0


def test_full_binary_cube():
    cls = full_class(3, ValueGrid.integer(2))
    d, cert = gapped_dim_integer(cls, alpha=1)
    assert d == 3
    assert cert.witnesses == (WitnessPair(1, 2),) * 3
    assert is_shattered_nonseq(GAPPED_INTEGER, cls, cert.points, cert.witnesses, 1)[0]


def test_log_gap_class():
    cls = log_gap_class_nonseq(Fraction(1, 8), Q=32)
    assert gapped_dim_real(cls, alpha=Fraction(1, 8), beta=Fraction(1, 32))[0] == 1
    assert fat_dim(cls, Fraction(1, 8))[0] >= 3


def test_gapped_real_small_alpha_may_shatter_singleton():
    one = FunctionClass(ValueGrid.real(4), ((0,),))
    d, cert = gapped_dim_real(one, alpha=H, beta=Q4)
    assert d == 1
    assert is_shattered_nonseq(GAPPED_REAL, one, cert.points, cert.witnesses, H, Q4)[0]


INTERVALS = [
    [("-1/2", "1/2"), ("0", "1/4"), ("-1", "-1")],
    [("-1", "1"), ("1/4", "3/4")],
    [("0", "1/2"), ("-1/4", "1/4"), ("1/2", "1")],
]


@pytest.mark.parametrize("intervals", INTERVALS)
@pytest.mark.parametrize("alpha", [Q4, H, Fraction(1)])
def test_interval_product_counts(intervals, alpha):
    cls = interval_product_class(intervals, 4)
    ranges = [Fraction(hi) - Fraction(lo) for lo, hi in intervals]
    expected = sum(r >= alpha for r in ranges)
    if (alpha / 2 * 4).denominator == 1:
        assert fat_dim(cls, alpha)[0] == expected
        assert fixed_scale_dim(cls, alpha)[0] == expected
    beta = Q4
    # witnesses may sit beta outside the attained range, clipped to [-1, 1]
    widened = sum(min(Fraction(hi) + beta, 1) - max(Fraction(lo) - beta, -1) >= alpha for lo, hi in intervals)
    assert gapped_dim_real(cls, alpha=alpha, beta=beta)[0] == widened
    assert widened == oracle_nonseq_dim(GAPPED_REAL, cls, alpha, beta)


def _check(kind, cls, alpha, beta=None, metric=None):
    fn = {GAPPED_INTEGER: lambda: gapped_dim_integer(cls, metric, alpha),
          GAPPED_REAL: lambda: gapped_dim_real(cls, metric, alpha, beta),
          FAT: lambda: fat_dim(cls, alpha), FIXED: lambda: fixed_scale_dim(cls, alpha)}[kind]
    d, cert = fn()
    assert cert.d == d
    if d:
        ok, realizers = is_shattered_nonseq(kind, cls, cert.points, cert.witnesses, alpha, beta, metric)
        assert ok and realizers == cert.realizers
    return d


@pytest.mark.parametrize("i", range(40))
def test_integer_dim_matches_oracle(i):
    cls = random_class(2 + i % 11, 1 + i % 5, ValueGrid.integer(2 + i % 3), 100 + i)
    for alpha in range(1, cls.grid.hi):
        assert _check(GAPPED_INTEGER, cls, alpha) == oracle_nonseq_dim(GAPPED_INTEGER, cls, alpha)


@pytest.mark.parametrize("i", range(10))
def test_integer_dim_tabulated_metric(i):
    metric = Metric.tabulated([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    cls = random_class(3 + i, 3, ValueGrid.integer(3), 500 + i)
    for alpha in (1, 2, 3):
        assert _check(GAPPED_INTEGER, cls, alpha, metric=metric) == oracle_nonseq_dim(GAPPED_INTEGER, cls, alpha,
                                                                                       metric=metric)


@pytest.mark.parametrize("i", range(40))
def test_real_dims_match_oracle(i):
    cls = random_class(2 + i % 11, 1 + i % 4, ValueGrid.real(4), 200 + i)
    for alpha in (Q4, H, Fraction(1)):
        for b in (Q4, H):
            assert _check(GAPPED_REAL, cls, alpha, b) == oracle_nonseq_dim(GAPPED_REAL, cls, alpha, b, refine=2)
        if (alpha / 2 * 4).denominator == 1:
            for kind in (FAT, FIXED):
                assert _check(kind, cls, alpha) == oracle_nonseq_dim(kind, cls, alpha, refine=2)


@pytest.mark.parametrize("i", range(20))
def test_scale_and_class_monotonicity(i):
    cls = random_class(3 + i % 8, 1 + i % 4, ValueGrid.real(4), 300 + i)
    sub = FunctionClass(cls.grid, cls.values[: max(1, cls.n_functions // 2)])
    alphas = [Fraction(k, 4) for k in range(1, 9)]
    even = [a for a in alphas if (a * 2).denominator == 1]
    vals = [_check(FAT, cls, a) for a in even]
    assert vals == sorted(vals, reverse=True)
    for kind in (FAT, FIXED):
        assert all(_check(kind, sub, a) <= _check(kind, cls, a) for a in even)
    for beta in (Q4, H):
        vals = [gapped_dim_real(cls, alpha=a, beta=beta)[0] for a in alphas]
        assert vals == sorted(vals, reverse=True)
        assert all(gapped_dim_real(sub, alpha=a, beta=beta)[0] <= v for a, v in zip(alphas, vals))
    for a in alphas:
        assert gapped_dim_real(cls, alpha=a, beta=Q4)[0] <= gapped_dim_real(cls, alpha=a, beta=H)[0]
    for a in alphas:
        if (a * 2).denominator == 1:
            assert fixed_scale_dim(cls, a)[0] <= fat_dim(cls, a)[0]


@pytest.mark.parametrize("i", range(30))
def test_gapped_real_below_fat_at_reduced_scale(i):
    cls = random_class(2 + i % 10, 1 + i % 4, ValueGrid.real(8), 400 + i)
    for alpha, beta in [(H, Fraction(1, 8)), (Fraction(3, 4), Fraction(1, 8)), (Fraction(1), Q4),
                        (Fraction(3, 4), Q4)]:
        if 2 * beta < alpha:
            assert gapped_dim_real(cls, alpha=alpha, beta=beta)[0] <= fat_dim(cls, alpha - 2 * beta)[0]


@pytest.mark.parametrize("seed", range(8))
def test_one_point_closure_fixed_equals_fat(seed):
    base = random_class(3, 1, ValueGrid.real(8), 700 + seed)
    cls = convexify(base, math.lcm(*range(1, 17)))
    for alpha, beta in [(Fraction(1, 4), Fraction(1, 8)), (H, Fraction(1, 8)), (Fraction(1), Q4)]:
        ft = fat_dim(cls, alpha)[0]
        assert fixed_scale_dim(cls, alpha)[0] == ft
        assert ft <= gapped_dim_real(cls, alpha=alpha, beta=beta)[0]


@pytest.mark.parametrize("seed", range(8))
def test_segment_closure_inequalities(seed):
    cls = convexify(random_class(2, 2, ValueGrid.real(8), 700 + seed), math.lcm(*range(1, 17)))
    for alpha, beta in [(H, Fraction(1, 8)), (Fraction(1), Q4)]:
        ft = fat_dim(cls, alpha)[0]
        assert fixed_scale_dim(cls, alpha)[0] <= ft
        assert ft <= gapped_dim_real(cls, alpha=alpha, beta=beta)[0]


def test_fixed_scale_is_not_monotone_in_alpha():
    # exact-gap condition: 3/2 separates -1 and 1/2, but no pair is exactly 1/2 apart
    cls = FunctionClass(ValueGrid.real(4), ((-4,), (2,), (-3,)))
    assert fixed_scale_dim(cls, Fraction(3, 2))[0] == 1
    assert fixed_scale_dim(cls, H)[0] == 0
    assert fat_dim(cls, H)[0] == 1


def test_full_class_certificate_checks_and_violation():
    cls = full_class(2, ValueGrid.integer(2))
    assert is_shattered_nonseq(GAPPED_INTEGER, cls, (0, 1), (WitnessPair(1, 2), WitnessPair(1, 2)), 1)[0]
    assert not is_shattered_nonseq(GAPPED_INTEGER, cls, (0, 1), (WitnessPair(1, 2), WitnessPair(1, 1)), 1)[0]
    with pytest.raises(ValueError):
        is_shattered_nonseq(GAPPED_INTEGER, cls, (0, 0), (WitnessPair(1, 2),) * 2, 1)


def test_fat_rejects_unrepresentable_half_scale():
    cls = random_class(3, 2, ValueGrid.real(4), 1)
    with pytest.raises(ValueError):
        fat_dim(cls, Q4)
    with pytest.raises(ValueError):
        gapped_dim_integer(cls, alpha=1)
