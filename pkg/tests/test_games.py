import itertools
from fractions import Fraction

import pytest

from dimlab.constructions import random_class
from dimlab.core import CapExceeded, FunctionClass, ValueGrid
from dimlab.games import DEFAULT_GRID, GameConfig, minimax_online_seq, minimax_transductive
from dimlab.rademacher import OffsetInstance, offset_rad_nonseq_exact

H = Fraction(1, 2)


def test_constant_zero_class_has_value_zero():
    zero = FunctionClass(ValueGrid.real(2), ((0, 0),))
    assert minimax_transductive(GameConfig(zero, 2, x_order=(0, 1))) == 0
    assert minimax_online_seq(GameConfig(zero, 2)) == 0


def test_zero_horizon():
    cls = random_class(3, 2, ValueGrid.real(2), 1)
    assert minimax_transductive(GameConfig(cls, 0, x_order=())) == 0
    assert minimax_online_seq(GameConfig(cls, 0)) == 0


def test_config_validation_and_round_trip():
    cls = random_class(3, 2, ValueGrid.real(2), 1)
    with pytest.raises(ValueError):
        GameConfig(cls, 1, yhat_grid=(H,))
    with pytest.raises(ValueError):
        GameConfig(cls, 1, y_grid=(0, 3))
    with pytest.raises(ValueError):
        GameConfig(cls, 2, x_order=(0,))
    with pytest.raises(IndexError):
        GameConfig(cls, 1, context_grid=(2,))
    with pytest.raises(ValueError):
        minimax_transductive(GameConfig(cls, 1))
    cfg = GameConfig(cls, 2, y_grid=(-1, 0, 1), x_order=(1, 0), context_grid=(0,))
    assert GameConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(CapExceeded):
        minimax_online_seq(GameConfig(cls, 5))


@pytest.mark.parametrize("seed", range(6))
def test_online_with_one_context_equals_transductive(seed):
    cls = random_class(3, 2, ValueGrid.real(2), 4000 + seed)
    for n in (1, 2, 3):
        for x in (0, 1):
            on = minimax_online_seq(GameConfig(cls, n, context_grid=(x,)))
            assert on == minimax_transductive(GameConfig(cls, n, x_order=(x,) * n))


@pytest.mark.parametrize("seed", range(6))
def test_online_dominates_every_fixed_order(seed):
    cls = random_class(3, 2, ValueGrid.real(2), 4100 + seed)
    n = 2
    on = minimax_online_seq(GameConfig(cls, n))
    for order in itertools.product(range(2), repeat=n):
        assert on >= minimax_transductive(GameConfig(cls, n, x_order=order))


@pytest.mark.parametrize("seed", range(6))
def test_grid_monotonicity(seed):
    cls = random_class(3, 2, ValueGrid.real(2), 4200 + seed)
    order = (0, 1)
    small = (-1, 0, 1)
    base = minimax_transductive(GameConfig(cls, 2, x_order=order))
    # a poorer learner raises the value, a poorer adversary lowers it
    assert minimax_transductive(GameConfig(cls, 2, yhat_grid=small, x_order=order)) >= base
    assert minimax_transductive(GameConfig(cls, 2, y_grid=small, x_order=order)) <= base


@pytest.mark.parametrize("seed", range(6))
def test_one_round_value_is_nonnegative(seed):
    cls = random_class(2 + seed % 3, 2, ValueGrid.real(2), 4300 + seed)
    for x in (0, 1):
        assert minimax_transductive(GameConfig(cls, 1, x_order=(x,))) >= 0


def test_two_constants_one_round():
    # learner answers 0; adversary answers +-2 (regret 4 - 1) or, when restricted, +-1 (regret 1 - 0)
    pm = FunctionClass(ValueGrid.real(1), ((1,), (-1,)))
    assert minimax_transductive(GameConfig(pm, 1, x_order=(0,))) == 3
    assert minimax_transductive(GameConfig(pm, 1, y_grid=(-1, 0, 1), x_order=(0,))) == 1


@pytest.mark.parametrize("seed", range(4))
def test_transductive_dominates_offset_complexity(seed):
    cls = random_class(3, 2, ValueGrid.real(2), 4400 + seed)
    for n in (1, 2):
        for design in itertools.product(range(2), repeat=n):
            for mu in itertools.product((-1, -H, 0, H, 1), repeat=n):
                ys = sorted(set(DEFAULT_GRID) | {m + s for m in mu for s in (-1, 1)})
                V = minimax_transductive(GameConfig(cls, n, y_grid=ys, x_order=design))
                assert V >= offset_rad_nonseq_exact(OffsetInstance(cls, 2, design=design, mu=mu))


@pytest.mark.parametrize("seed", range(4))
def test_superadditive_in_repetition(seed):
    cls = random_class(3, 2, ValueGrid.real(2), 4500 + seed)
    design = (0, 1)
    v1 = minimax_transductive(GameConfig(cls, 2, y_grid=(-1, 0, 1), x_order=design))
    v2 = minimax_transductive(GameConfig(cls, 4, y_grid=(-1, 0, 1), x_order=design + design))
    assert v2 >= v1
