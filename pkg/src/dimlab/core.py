"""Domain types: grid-valued finite function classes, metrics, witnesses and trees.

Every value is stored as an integer numerator over the class denominator ``Q``.
Integer alphabets are ``[1..M]`` with ``Q = 1``; real grids are the rationals
``k/Q`` for ``-Q <= k <= Q``.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

Path = tuple[int, ...]
SampleDesign = tuple[int, ...]

INTEGER = "integer"
REAL_GRID = "real_grid"

LABEL_POINT = "point"
LABEL_VALUE = "value"
LABEL_WITNESS = "witness"
_LABEL_KINDS = (LABEL_POINT, LABEL_VALUE, LABEL_WITNESS)


class CapExceeded(ValueError):
    """Raised when an exact routine is asked to work beyond its size cap."""


def as_fraction(x: Any) -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions. Floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def format_fraction(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ValueGrid:
    """Finite value alphabet: ``[1..M]`` or ``{k/Q : |k| <= Q}``."""

    Q: int
    kind: str = REAL_GRID
    M: int | None = None

    def __post_init__(self):
        if self.kind == INTEGER:
            if self.Q != 1:
                raise ValueError("integer alphabets have Q = 1")
            if self.M is None or self.M < 2:
                raise ValueError("integer alphabets need M >= 2")
        elif self.kind == REAL_GRID:
            if self.Q < 1:
                raise ValueError("Q must be a positive integer")
            if self.M is not None:
                raise ValueError("M is only meaningful for integer alphabets")
        else:
            raise ValueError(f"unknown grid kind {self.kind!r}")

    @classmethod
    def integer(cls, M: int) -> ValueGrid:
        return cls(1, INTEGER, M)

    @classmethod
    def real(cls, Q: int) -> ValueGrid:
        return cls(Q, REAL_GRID)

    @property
    def lo(self) -> int:
        return 1 if self.kind == INTEGER else -self.Q

    @property
    def hi(self) -> int:
        return self.M if self.kind == INTEGER else self.Q

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def alphabet(self) -> range:
        """All numerators, increasing."""
        return range(self.lo, self.hi + 1)

    def index(self, num: int) -> int:
        return num - self.lo

    def contains(self, num: int) -> bool:
        return self.lo <= num <= self.hi

    def value(self, num: int) -> Fraction:
        return Fraction(num, self.Q)

    def numerator(self, value: Any, *, what: str = "value") -> int:
        """Exact numerator of ``value`` over ``Q``; raises when off-grid."""
        v = as_fraction(value) * self.Q
        if v.denominator != 1:
            raise ValueError(f"{what} {format_fraction(as_fraction(value))} is not a multiple of 1/{self.Q}")
        return v.numerator

    def representable(self, value: Any) -> bool:
        return (as_fraction(value) * self.Q).denominator == 1

    def clip(self, num: int) -> int:
        return min(max(num, self.lo), self.hi)


@dataclass(frozen=True)
class Metric:
    """Distance on the value alphabet.

    ``kind="absolute"`` is ``|a - b|`` on values.  ``kind="tabulated"`` carries a
    symmetric matrix indexed by alphabet position (increasing numerators); it is
    checked for zero diagonal, symmetry, nonnegativity and the triangle
    inequality when constructed.
    """

    kind: str = "absolute"
    table: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if self.kind == "absolute":
            if self.table is not None:
                raise ValueError("absolute metric takes no table")
            return
        if self.kind != "tabulated" or self.table is None:
            raise ValueError("metric must be 'absolute' or 'tabulated' with a table")
        table = tuple(tuple(as_fraction(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError("metric table must be square")
        for a in range(n):
            if table[a][a] != 0:
                raise ValueError("metric table needs a zero diagonal")
            for b in range(n):
                if table[a][b] < 0 or table[a][b] != table[b][a]:
                    raise ValueError("metric table must be symmetric and nonnegative")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[a][c] > table[a][b] + table[b][c]:
                        raise ValueError(f"triangle inequality fails at alphabet positions ({a}, {b}, {c})")

    @classmethod
    def absolute(cls) -> Metric:
        return cls()

    @classmethod
    def tabulated(cls, table: Sequence[Sequence[Any]]) -> Metric:
        return cls("tabulated", tuple(tuple(as_fraction(v) for v in row) for row in table))

    @property
    def is_absolute(self) -> bool:
        return self.kind == "absolute"

    def distances(self, grid: ValueGrid) -> dict[tuple[int, int], Fraction]:
        """Distance lookup keyed by numerator pairs, in value units."""
        return _distance_table(self, grid)

    def dist(self, grid: ValueGrid, a: int, b: int) -> Fraction:
        if self.is_absolute:
            return Fraction(abs(a - b), grid.Q)
        return self.table[grid.index(a)][grid.index(b)]

    def to_json(self) -> dict:
        if self.is_absolute:
            return {"kind": "absolute"}
        return {"kind": "tabulated", "table": [[format_fraction(v) for v in row] for row in self.table]}

    @classmethod
    def from_json(cls, obj: dict) -> Metric:
        if obj.get("kind", "absolute") == "absolute":
            return cls.absolute()
        return cls.tabulated(obj["table"])


@functools.lru_cache(maxsize=64)
def _distance_table(metric: Metric, grid: ValueGrid) -> dict[tuple[int, int], Fraction]:
    if not metric.is_absolute and len(metric.table) != grid.size:
        raise ValueError(f"metric table has {len(metric.table)} rows, alphabet has {grid.size}")
    alphabet = grid.alphabet()
    return {(a, b): metric.dist(grid, a, b) for a in alphabet for b in alphabet}


@dataclass(frozen=True)
class WitnessPair:
    """The pair ``(s[-1], s[+1])``; scalar witnesses are stored with ``lo == hi``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))

    def __getitem__(self, sign: int) -> Fraction:
        if sign == -1:
            return self.lo
        if sign == 1:
            return self.hi
        raise KeyError(sign)

    @property
    def gap(self) -> Fraction:
        return abs(self.hi - self.lo)

    def to_json(self) -> list[str]:
        return [format_fraction(self.lo), format_fraction(self.hi)]

    @classmethod
    def from_json(cls, obj) -> WitnessPair:
        if isinstance(obj, (list, tuple)):
            lo, hi = obj
            return cls(as_fraction(lo), as_fraction(hi))
        s = as_fraction(obj)
        return cls(s, s)


@dataclass(frozen=True)
class FunctionClass:
    """A finite class as a deduplicated ``|F| x n_X`` matrix of numerators.

    Duplicate rows are dropped at construction, keeping the first occurrence.
    """

    grid: ValueGrid
    values: tuple[tuple[int, ...], ...]
    domain: tuple[str, ...] = field(default=())

    def __post_init__(self):
        rows = []
        seen = set()
        for row in self.values:
            row = tuple(int(v) for v in row)
            if row not in seen:
                seen.add(row)
                rows.append(row)
        if not rows:
            raise ValueError("a function class needs at least one function")
        width = len(rows[0])
        if width < 1:
            raise ValueError("a function class needs at least one domain point")
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged value matrix")
            for v in row:
                if not self.grid.contains(v):
                    raise ValueError(f"value numerator {v} outside the grid [{self.grid.lo}, {self.grid.hi}]")
        domain = tuple(str(x) for x in self.domain) if self.domain else tuple(f"x{i}" for i in range(width))
        if len(domain) != width:
            raise ValueError("domain labels do not match the number of columns")
        if len(set(domain)) != width:
            raise ValueError("domain labels must be distinct")
        object.__setattr__(self, "values", tuple(rows))
        object.__setattr__(self, "domain", domain)

    @property
    def n_functions(self) -> int:
        return len(self.values)

    @property
    def n_points(self) -> int:
        return len(self.domain)

    @property
    def Q(self) -> int:
        return self.grid.Q

    def __len__(self) -> int:
        return len(self.values)

    def eval(self, f: int, x: int) -> Fraction:
        return eval_value(self, f, x)

    def column(self, x: int) -> tuple[int, ...]:
        return tuple(row[x] for row in self.values)

    def attained(self, x: int, rows: Iterable[int] | None = None) -> list[int]:
        """Sorted distinct numerators taken at ``x`` (optionally by a subset of rows)."""
        rows = range(len(self.values)) if rows is None else rows
        return sorted({self.values[f][x] for f in rows})

    def subclass(self, rows: Iterable[int]) -> FunctionClass:
        return FunctionClass(self.grid, tuple(self.values[f] for f in rows), self.domain)

    def index_of(self, row: Sequence[int]) -> int | None:
        try:
            return self.values.index(tuple(row))
        except ValueError:
            return None

    def to_json(self) -> dict:
        obj: dict[str, Any] = {"Q": self.grid.Q, "alphabet": self.grid.kind}
        if self.grid.kind == INTEGER:
            obj["M"] = self.grid.M
        obj["domain"] = list(self.domain)
        obj["values"] = [list(row) for row in self.values]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> FunctionClass:
        kind = obj.get("alphabet", REAL_GRID)
        if kind == INTEGER:
            grid = ValueGrid.integer(int(obj["M"]))
            if int(obj.get("Q", 1)) != 1:
                raise ValueError("integer alphabets have Q = 1")
        else:
            grid = ValueGrid.real(int(obj["Q"]))
        values = obj["values"]
        if not isinstance(values, list) or not all(isinstance(r, list) for r in values):
            raise ValueError("'values' must be a list of lists")
        for row in values:
            for v in row:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise ValueError("value numerators must be integers")
        return cls(grid, tuple(tuple(r) for r in values), tuple(obj.get("domain") or ()))


def eval_value(cls: FunctionClass, f: int, x: int) -> Fraction:
    """``f(x)`` as an exact rational."""
    if not 0 <= f < cls.n_functions:
        raise IndexError(f"function index {f} out of range for |F| = {cls.n_functions}")
    if not 0 <= x < cls.n_points:
        raise IndexError(f"point index {x} out of range for n_X = {cls.n_points}")
    return cls.grid.value(cls.values[f][x])


def path_index(path: Sequence[int]) -> int:
    """Index of a sign path with the first sign as the most significant bit."""
    idx = 0
    for e in path:
        idx = 2 * idx + (1 if e == 1 else 0)
    return idx


def path_from_index(idx: int, length: int) -> Path:
    return tuple(1 if (idx >> (length - 1 - i)) & 1 else -1 for i in range(length))


def heap_index(path: Sequence[int], t: int) -> int:
    """0-based heap position of the level-``t`` node reached along ``path``."""
    return (1 << (t - 1)) - 1 + path_index(path[: t - 1])


@dataclass(frozen=True)
class LabeledTree:
    """Complete binary tree of depth ``d`` stored level by level in heap order.

    Level ``t`` (1-based) occupies positions ``2**(t-1) - 1 .. 2**t - 2``; within a
    level nodes are ordered by the prefix ``eps_{1:t-1}`` with ``-1`` before ``+1``.
    """

    depth: int
    labels: tuple
    label_kind: str = LABEL_POINT

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("tree depth must be nonnegative")
        if self.label_kind not in _LABEL_KINDS:
            raise ValueError(f"label kind must be one of {_LABEL_KINDS}")
        labels = tuple(self.labels)
        if len(labels) != (1 << self.depth) - 1:
            raise ValueError(f"depth-{self.depth} tree needs {(1 << self.depth) - 1} labels, got {len(labels)}")
        if self.label_kind == LABEL_VALUE:
            labels = tuple(as_fraction(v) for v in labels)
        elif self.label_kind == LABEL_WITNESS:
            labels = tuple(v if isinstance(v, WitnessPair) else WitnessPair.from_json(v) for v in labels)
        else:
            labels = tuple(int(v) for v in labels)
        object.__setattr__(self, "labels", labels)

    def label_at(self, path: Sequence[int], t: int):
        return tree_label_at(self, path, t)

    def level(self, t: int) -> tuple:
        start = (1 << (t - 1)) - 1
        return self.labels[start : start + (1 << (t - 1))]

    def is_constant_level(self) -> bool:
        return all(len(set(self.level(t))) == 1 for t in range(1, self.depth + 1))

    def subtree(self, sign: int) -> LabeledTree:
        """Left (``sign=-1``) or right (``sign=+1``) subtree of the root."""
        if self.depth == 0:
            raise ValueError("an empty tree has no subtrees")
        labels = []
        for t in range(2, self.depth + 1):
            lvl = self.level(t)
            half = len(lvl) // 2
            labels.extend(lvl[:half] if sign == -1 else lvl[half:])
        return LabeledTree(self.depth - 1, tuple(labels), self.label_kind)

    @classmethod
    def constant(cls, per_level: Sequence, label_kind: str = LABEL_POINT) -> LabeledTree:
        labels = []
        for t, lab in enumerate(per_level, start=1):
            labels.extend([lab] * (1 << (t - 1)))
        return cls(len(per_level), tuple(labels), label_kind)

    @classmethod
    def join(cls, root, left: LabeledTree, right: LabeledTree) -> LabeledTree:
        if left.depth != right.depth or left.label_kind != right.label_kind:
            raise ValueError("joined subtrees must share depth and label kind")
        labels = [root]
        for t in range(1, left.depth + 1):
            labels.extend(left.level(t))
            labels.extend(right.level(t))
        return cls(left.depth + 1, tuple(labels), left.label_kind)

    def to_json(self) -> dict:
        if self.label_kind == LABEL_VALUE:
            labels = [format_fraction(v) for v in self.labels]
        elif self.label_kind == LABEL_WITNESS:
            labels = [w.to_json() for w in self.labels]
        else:
            labels = list(self.labels)
        return {"depth": self.depth, "label_kind": self.label_kind, "labels": labels}

    @classmethod
    def from_json(cls, obj: dict) -> LabeledTree:
        return cls(int(obj["depth"]), tuple(obj["labels"]), obj.get("label_kind", LABEL_POINT))


def tree_label_at(tree: LabeledTree, path: Sequence[int], t: int):
    """Label of the level-``t`` node on ``path``; depends only on ``path[:t-1]``."""
    if not 1 <= t <= tree.depth:
        raise IndexError(f"level {t} outside 1..{tree.depth}")
    if len(path) < t - 1:
        raise ValueError("path shorter than the requested level")
    return tree.labels[heap_index(path, t)]


def dumps(obj: Any) -> str:
    """Canonical JSON used for files and fingerprints."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
