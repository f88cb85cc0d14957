"""Instance corpus: named classes with tags that route them to checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..constructions import ClassRecipe
from ..core import INTEGER, FunctionClass, Metric, as_fraction

DEFAULT_NAME = "default.json"


@dataclass
class Entry:
    name: str
    tags: frozenset
    recipe: ClassRecipe | None = None
    inline: dict | None = None
    metric: Metric | None = None
    alphas: tuple | None = None
    betas: tuple | None = None
    params: dict = field(default_factory=dict)
    _cls: FunctionClass | None = None

    @property
    def cls(self) -> FunctionClass:
        if self._cls is None:
            self._cls = FunctionClass.from_json(self.inline) if self.inline is not None else self.recipe.build()
        return self._cls

    def scales(self) -> list[Fraction]:
        """Scales to sweep; defaults depend on the grid."""
        if self.alphas is not None:
            return list(self.alphas)
        grid = self.cls.grid
        if grid.kind == INTEGER:
            return [Fraction(a) for a in range(1, grid.M)]
        Q = grid.Q
        return sorted({Fraction(2, Q), Fraction(1, 2), Fraction(1)} & {Fraction(j, Q) for j in range(1, 2 * Q + 1)})

    def margins(self) -> list[Fraction]:
        if self.betas is not None:
            return list(self.betas)
        return [Fraction(1, self.cls.grid.Q)]

    def describe(self) -> dict:
        out = {"name": self.name, "class": self.cls.to_json()}
        if self.metric is not None:
            out["metric"] = self.metric.to_json()
        return out


@dataclass
class Corpus:
    entries: list[Entry]
    khintchine_max_k: int = 30
    g_max_n: int = 12
    g_M: tuple[int, ...] = (2, 3, 4, 5)

    def tagged(self, *tags: str) -> list[Entry]:
        return [e for e in self.entries if all(t in e.tags for t in tags)]

    @classmethod
    def from_json(cls, obj: dict) -> Corpus:
        if not isinstance(obj, dict) or not isinstance(obj.get("classes"), list):
            raise ValueError("a corpus is an object with a 'classes' list")
        entries, names = [], set()
        for raw in obj["classes"]:
            name = raw["name"]
            if name in names:
                raise ValueError(f"duplicate corpus entry {name!r}")
            names.add(name)
            if ("recipe" in raw) == ("class" in raw):
                raise ValueError(f"entry {name!r} needs exactly one of 'recipe' or 'class'")
            entries.append(Entry(
                name=name,
                tags=frozenset(raw.get("tags", ())),
                recipe=ClassRecipe.from_json(raw["recipe"]) if "recipe" in raw else None,
                inline=raw.get("class"),
                metric=Metric.from_json(raw["metric"]) if "metric" in raw else None,
                alphas=tuple(as_fraction(a) for a in raw["alphas"]) if "alphas" in raw else None,
                betas=tuple(as_fraction(b) for b in raw["betas"]) if "betas" in raw else None,
                params=dict(raw.get("params", {})),
            ))
        return cls(entries, int(obj.get("khintchine_max_k", 30)), int(obj.get("g_max_n", 12)),
                   tuple(int(m) for m in obj.get("g_M", (2, 3, 4, 5))))


def load(path: str | Path | None = None) -> Corpus:
    """Read a corpus file; ``None`` loads the shipped default."""
    if path is None:
        text = resources.files("dimlab.harness").joinpath("corpus", DEFAULT_NAME).read_text()
    else:
        text = Path(path).read_text()
    return Corpus.from_json(json.loads(text))
