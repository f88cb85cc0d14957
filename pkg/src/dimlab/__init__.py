"""Exact calculators for gapped scale-sensitive dimensions on finite function classes."""

from .core import FunctionClass, LabeledTree, Metric, ValueGrid, WitnessPair, eval_value, tree_label_at

__version__ = "0.1.0"

__all__ = ["FunctionClass", "LabeledTree", "Metric", "ValueGrid", "WitnessPair", "eval_value", "tree_label_at"]
