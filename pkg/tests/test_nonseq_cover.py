import math
from fractions import Fraction

import pytest

from dimlab.constructions import random_class
from dimlab.core import CapExceeded, FunctionClass, Metric, ValueGrid
from dimlab.nonseq_cover import cover_greedy, cover_min_exact, is_cover, packing_max_exact
from dimlab.nonseq_dims import gapped_dim_integer
from dimlab.oracles import oracle_cover_min, oracle_packing_max

H = Fraction(1, 2)


def test_examples():
    pm = FunctionClass(ValueGrid.real(2), ((-2, -2), (2, 2)))
    assert cover_min_exact(pm, (0, 1), alpha=H)[0] == 2
    near = FunctionClass(ValueGrid.real(4), ((0, 1), (1, 0), (2, 2)))
    assert cover_min_exact(near, (0, 1), alpha=H)[0] == 1
    three = FunctionClass(ValueGrid.real(1), ((-1,), (0,), (1,)))
    assert packing_max_exact(three, (0,), alpha=1)[0] == 3
    one = FunctionClass(ValueGrid.real(4), ((1, 2),))
    assert cover_greedy(one, (0, 1), alpha=0)[0] == 1
    assert packing_max_exact(one, (0, 1), alpha=H)[0] == 1


def test_empty_design_needs_one_center():
    cls = random_class(5, 2, ValueGrid.real(4), 3)
    assert cover_min_exact(cls, (), alpha=H)[0] == 1


def test_alpha_must_be_representable():
    cls = random_class(5, 2, ValueGrid.real(4), 3)
    with pytest.raises(ValueError):
        cover_min_exact(cls, (0,), alpha=Fraction(1, 8))
    with pytest.raises(IndexError):
        cover_min_exact(cls, (5,), alpha=H)


def test_caps():
    big = FunctionClass(ValueGrid.real(8), tuple((a, b) for a in range(-8, 9) for b in range(-8, -6)))
    with pytest.raises(CapExceeded):
        cover_min_exact(big, (0, 1), alpha=Fraction(1, 8))
    with pytest.raises(CapExceeded):
        packing_max_exact(big, (0, 1), alpha=Fraction(1, 8))


def _instances():
    for i in range(30):
        yield random_class(2 + i % 7, 1 + i % 4, ValueGrid.real(4), 900 + i), None
    metric = Metric.tabulated([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    for i in range(10):
        yield random_class(2 + i % 7, 1 + i % 3, ValueGrid.integer(3), 950 + i), metric
        yield random_class(2 + i % 7, 1 + i % 3, ValueGrid.integer(4), 970 + i), None


INSTANCES = list(_instances())


@pytest.mark.parametrize("cls,metric", INSTANCES)
def test_cover_and_packing_match_oracles(cls, metric):
    design = tuple(range(cls.n_points))
    alphas = [Fraction(k, 4) for k in range(0, 9)] if cls.grid.Q > 1 else [0, 1, 2, 3]
    prev_cover = prev_pack = None
    for alpha in alphas:
        n, cover = cover_min_exact(cls, design, metric, alpha)
        assert n == len(cover) == oracle_cover_min(cls, design, metric, alpha)
        assert is_cover(cls, design, metric, alpha, cover.centers)
        g, gcover = cover_greedy(cls, design, metric, alpha)
        assert g >= n and is_cover(cls, design, metric, alpha, gcover.centers)
        p, members = packing_max_exact(cls, design, metric, alpha)
        assert p == len(members) == oracle_packing_max(cls, design, metric, alpha)
        assert n <= p
        if prev_cover is not None:
            assert n <= prev_cover and p <= prev_pack
        prev_cover, prev_pack = n, p


def test_grid_centers_match_half_grid_oracle():
    # refining the grid does not shrink the minimum for representable alpha
    for i in range(15):
        cls = random_class(2 + i % 7, 1 + i % 3, ValueGrid.real(2), 1100 + i)
        fine = FunctionClass(ValueGrid.real(4), tuple(tuple(2 * v for v in row) for row in cls.values))
        design = tuple(range(cls.n_points))
        for alpha in (H, Fraction(1)):
            assert cover_min_exact(cls, design, alpha=alpha)[0] == cover_min_exact(fine, design, alpha=alpha)[0]


def test_dropping_a_center_breaks_the_cover():
    cls = random_class(6, 3, ValueGrid.real(4), 12)
    n, cover = cover_min_exact(cls, (0, 1, 2), alpha=Fraction(1, 4))
    assert n > 1
    assert not is_cover(cls, (0, 1, 2), None, Fraction(1, 4), cover.centers[1:])


@pytest.mark.parametrize("seed", range(10))
def test_integer_cover_bound(seed):
    M = 3
    cls = random_class(8, 4, ValueGrid.integer(M), 1200 + seed)
    design = (0, 1, 2, 3)
    for alpha in (1, 2):
        n = cover_min_exact(cls, design, alpha=alpha)[0]
        d = gapped_dim_integer(cls, alpha=alpha)[0]
        assert math.log(n) <= 16 * d * math.log(math.e * len(design) * M) ** 2 + 1e-9
