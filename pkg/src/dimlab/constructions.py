"""Generators for the named example classes and for seeded random instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .combinatorics import sign_patterns
from .core import CapExceeded, FunctionClass, ValueGrid, as_fraction
from .rng import SplitMix64

CLASS_CAP = 4096


def _log2_exact(alpha: Fraction) -> int:
    """``m`` with ``alpha = 2**-m``; raises otherwise."""
    if alpha.numerator != 1 or alpha.denominator & (alpha.denominator - 1):
        raise ValueError("alpha must be a power 1/2**m")
    return alpha.denominator.bit_length() - 1


def log_gap_class_nonseq(alpha, Q: int | None = None) -> FunctionClass:
    """``2**d`` functions on ``d = log2(1/alpha)`` points with ``f^eps(x_i) = eps_i * a^eps``.

    ``a^eps = alpha + sum_i (eps_i + 1)/2 * 2**(i-1) * alpha`` ranges over
    ``alpha, 2 alpha, ..., 1``.
    """
    alpha = as_fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    d = _log2_exact(alpha)
    Q = alpha.denominator if Q is None else Q
    if Q % alpha.denominator:
        raise ValueError("Q must be a multiple of 1/alpha")
    grid = ValueGrid.real(Q)
    rows = []
    for eps in sign_patterns(d):
        a = alpha + sum(Fraction((e + 1) // 2) * 2 ** (i - 1) * alpha for i, e in enumerate(eps, start=1))
        rows.append(tuple(grid.numerator(e * a) for e in eps))
    return FunctionClass(grid, tuple(rows), tuple(f"x{i}" for i in range(1, d + 1)))


def single_point_grid_class(step, denominator: int | None = None) -> FunctionClass:
    """One point, one constant function per multiple of ``step`` in ``[-1, 1]``.

    ``denominator`` refines the value grid (so that e.g. ``step/4`` is
    representable) without adding functions.
    """
    step = as_fraction(step)
    if step <= 0 or step > 1 or (1 / step).denominator != 1:
        raise ValueError("step must be 1/k for a positive integer k")
    k = int(1 / step)
    Q = k if denominator is None else denominator
    if Q % k:
        raise ValueError("denominator must be a multiple of 1/step")
    grid = ValueGrid.real(Q)
    rows = tuple((grid.numerator(Fraction(j, k)),) for j in range(-k, k + 1))
    return FunctionClass(grid, rows, ("x",))


def interval_product_class(intervals: Sequence[tuple[Any, Any]], Q: int, step=None) -> FunctionClass:
    """All combinations of grid values ``f(x_i)`` in ``[lo_i, hi_i]``."""
    grid = ValueGrid.real(Q)
    step_num = 1 if step is None else grid.numerator(step, what="step")
    if step_num <= 0:
        raise ValueError("step must be positive")
    axes = []
    for lo, hi in intervals:
        a, b = grid.numerator(lo, what="interval end"), grid.numerator(hi, what="interval end")
        if a > b or not grid.contains(a) or not grid.contains(b):
            raise ValueError(f"bad interval [{lo}, {hi}]")
        axes.append(list(range(a, b + 1, step_num)))
    count = 1
    for ax in axes:
        count *= len(ax)
    if count > CLASS_CAP:
        raise CapExceeded(f"interval product has {count} functions, cap is {CLASS_CAP}")
    return FunctionClass(grid, tuple(itertools.product(*axes)))


def full_class(n_points: int, grid: ValueGrid) -> FunctionClass:
    """Every function from ``n_points`` points into the grid."""
    if grid.size**n_points > CLASS_CAP:
        raise CapExceeded(f"full class has {grid.size ** n_points} functions, cap is {CLASS_CAP}")
    return FunctionClass(grid, tuple(itertools.product(grid.alphabet(), repeat=n_points)))


def convexify(cls: FunctionClass, resolution: int) -> FunctionClass:
    """Close the class under on-grid pairwise mixtures with weights ``j/resolution``.

    Mixtures whose values fall off the grid are dropped; the closure is
    iterated to a fixpoint.  Original rows keep their order and new rows
    follow, sorted within each round.
    """
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    rows = list(cls.values)
    seen = set(rows)
    frontier = list(rows)
    while frontier:
        fresh = set()
        for f in frontier:
            for g in rows:
                if f == g:
                    continue
                # weight j/resolution is on-grid iff it is a multiple of 1/gcd(resolution, gcd(f - g))
                step = math.gcd(resolution, math.gcd(*(a - b for a, b in zip(f, g))))
                for k in range(1, step):
                    t = tuple(b + (a - b) * k // step for a, b in zip(f, g))
                    if t not in seen:
                        fresh.add(t)
        if len(seen) + len(fresh) > CLASS_CAP:
            raise CapExceeded(f"convex closure exceeds {CLASS_CAP} functions")
        frontier = sorted(fresh)
        seen.update(frontier)
        rows.extend(frontier)
    return FunctionClass(cls.grid, tuple(rows), cls.domain)


def random_class(n_functions: int, n_points: int, grid: ValueGrid, seed: int,
                 levels: Sequence[int] | None = None) -> FunctionClass:
    """``n_functions`` rows drawn uniformly (from ``levels`` if given); duplicates collapse."""
    if n_functions < 1 or n_points < 1:
        raise ValueError("need at least one function and one point")
    pool = list(grid.alphabet()) if levels is None else [int(v) for v in levels]
    for v in pool:
        if not grid.contains(v):
            raise ValueError(f"level {v} outside the grid")
    rng = SplitMix64(seed)
    rows = [tuple(pool[rng.below(len(pool))] for _ in range(n_points)) for _ in range(n_functions)]
    return FunctionClass(grid, tuple(rows))


RECIPE_KINDS = ("log-gap-nonseq", "single-point-grid", "interval-product", "full", "random", "convexify")


@dataclass(frozen=True)
class ClassRecipe:
    """A named generator plus its parameters, as read from JSON."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> FunctionClass:
        p = self.params
        if self.kind == "log-gap-nonseq":
            return log_gap_class_nonseq(p["alpha"], p.get("Q"))
        if self.kind == "single-point-grid":
            return single_point_grid_class(p["step"], p.get("denominator"))
        if self.kind == "interval-product":
            return interval_product_class([tuple(iv) for iv in p["intervals"]], int(p["Q"]), p.get("step"))
        if self.kind == "full":
            return full_class(int(p["n_points"]), _grid(p))
        if self.kind == "random":
            if self.seed is None:
                raise ValueError("random recipes need a seed")
            return random_class(int(p["n_functions"]), int(p["n_points"]), _grid(p), self.seed, p.get("levels"))
        if self.kind == "convexify":
            base = ClassRecipe.from_json(p["base"]).build() if "base" in p else FunctionClass.from_json(p["class"])
            return convexify(base, int(p["resolution"]))
        raise ValueError(f"unknown recipe kind {self.kind!r}; expected one of {RECIPE_KINDS}")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "params": self.params}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ClassRecipe:
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ValueError("a recipe needs a 'kind'")
        return cls(obj["kind"], dict(obj.get("params", {})), obj.get("seed"))


def _grid(p: dict) -> ValueGrid:
    if p.get("alphabet", "real_grid") == "integer":
        return ValueGrid.integer(int(p["M"]))
    return ValueGrid.real(int(p["Q"]))
