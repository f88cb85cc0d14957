"""Backward induction for square-loss prediction games on finite action grids.

The learner picks ``yhat`` from ``yhat_grid``, the adversary answers with ``y``
from ``y_grid``; the payoff is the learner's cumulative square loss minus the
best function's loss in hindsight.  Restricting the learner can only raise the
value and restricting the adversary can only lower it.

The continuation value depends on the history only through the vector of
per-function cumulative losses, which is used as the memo key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import CapExceeded, FunctionClass, as_fraction, format_fraction

STATE_CAP = 1 << 20
DEFAULT_GRID = tuple(Fraction(k, 2) for k in range(-4, 5))


def _grid(values) -> tuple[Fraction, ...]:
    out = tuple(sorted({as_fraction(v) for v in values}))
    if not out:
        raise ValueError("action grids must be nonempty")
    if Fraction(0) not in out:
        raise ValueError("action grids must contain 0")
    if out[0] < -2 or out[-1] > 2:
        raise ValueError("action grids must lie in [-2, 2]")
    return out


@dataclass(frozen=True)
class GameConfig:
    """Class, horizon, grids, and either a fixed context order or a context menu."""

    cls: FunctionClass
    n: int
    yhat_grid: tuple[Fraction, ...] = DEFAULT_GRID
    y_grid: tuple[Fraction, ...] = DEFAULT_GRID
    x_order: tuple[int, ...] | None = None
    context_grid: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("horizon must be nonnegative")
        object.__setattr__(self, "yhat_grid", _grid(self.yhat_grid))
        object.__setattr__(self, "y_grid", _grid(self.y_grid))
        if self.x_order is not None:
            object.__setattr__(self, "x_order", tuple(int(x) for x in self.x_order))
            if len(self.x_order) != self.n:
                raise ValueError("x_order length must equal the horizon")
        if self.context_grid is not None:
            object.__setattr__(self, "context_grid", tuple(int(x) for x in self.context_grid))
            if not self.context_grid:
                raise ValueError("context grid must be nonempty")
        for x in (self.x_order or ()) + (self.context_grid or ()):
            if not 0 <= x < self.cls.n_points:
                raise IndexError(f"context index {x} out of range")

    def to_json(self) -> dict:
        out = {
            "class": self.cls.to_json(),
            "n": self.n,
            "yhat_grid": [format_fraction(v) for v in self.yhat_grid],
            "y_grid": [format_fraction(v) for v in self.y_grid],
        }
        if self.x_order is not None:
            out["x_order"] = list(self.x_order)
        if self.context_grid is not None:
            out["context_grid"] = list(self.context_grid)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> GameConfig:
        return cls(
            FunctionClass.from_json(obj["class"]),
            int(obj["n"]),
            tuple(obj.get("yhat_grid", DEFAULT_GRID)),
            tuple(obj.get("y_grid", DEFAULT_GRID)),
            tuple(obj["x_order"]) if "x_order" in obj else None,
            tuple(obj["context_grid"]) if "context_grid" in obj else None,
        )


class _Scaled:
    def __init__(self, cfg: GameConfig):
        L = cfg.cls.Q
        for v in cfg.yhat_grid + cfg.y_grid:
            L = math.lcm(L, v.denominator)
        self.L = L
        self.yhat = [int(v * L) for v in cfg.yhat_grid]
        self.y = [int(v * L) for v in cfg.y_grid]
        self.values = [[v * (L // cfg.cls.Q) for v in row] for row in cfg.cls.values]
        # learner loss min over yhat of max over y, precomputed per continuation vector below
        self.loss = [[(a - b) ** 2 for b in self.y] for a in self.yhat]


def _step(sc: _Scaled, conts: Sequence[int]) -> int:
    """``min_yhat max_y (yhat - y)**2 + W(y)`` in scaled units."""
    return min(max(row[j] + conts[j] for j in range(len(conts))) for row in sc.loss)


def minimax_transductive(cfg: GameConfig) -> Fraction:
    """Value of the game with the context order fixed in advance."""
    if cfg.x_order is None:
        raise ValueError("the transductive game needs x_order")
    n = cfg.n
    if n * len(cfg.y_grid) ** n > STATE_CAP:
        raise CapExceeded(f"n * |y_grid|**n exceeds {STATE_CAP}")
    sc = _Scaled(cfg)
    memo: dict = {}

    def value(t: int, losses: tuple[int, ...]) -> int:
        key = (t, losses)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if t == n:
            out = -min(losses)
        else:
            x = cfg.x_order[t]
            conts = [value(t + 1, tuple(l + (row[x] - y) ** 2 for l, row in zip(losses, sc.values))) for y in sc.y]
            out = _step(sc, conts)
        memo[key] = out
        return out

    return Fraction(value(0, (0,) * cfg.cls.n_functions), sc.L * sc.L)


def minimax_online_seq(cfg: GameConfig) -> Fraction:
    """Value of the game where the adversary picks each context from ``context_grid``."""
    contexts = cfg.context_grid if cfg.context_grid is not None else tuple(range(cfg.cls.n_points))
    n = cfg.n
    if n * (len(contexts) * len(cfg.y_grid)) ** n > STATE_CAP:
        raise CapExceeded(f"n * (|X| |y_grid|)**n exceeds {STATE_CAP}")
    sc = _Scaled(cfg)
    memo: dict = {}

    def value(t: int, losses: tuple[int, ...]) -> int:
        key = (t, losses)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if t == n:
            out = -min(losses)
        else:
            out = None
            for x in contexts:
                conts = [value(t + 1, tuple(l + (row[x] - y) ** 2 for l, row in zip(losses, sc.values)))
                         for y in sc.y]
                v = _step(sc, conts)
                out = v if out is None else max(out, v)
        memo[key] = out
        return out

    return Fraction(value(0, (0,) * cfg.cls.n_functions), sc.L * sc.L)
