"""Exact computations with the topological cycle space, chord-word reduction
and finite-character homology of locally finite graphs."""

from .graphs import FiniteGraph, LeveledFamily, builtin
from .spanning import RootedTree, chord_index, comb_tree, normal_spanning_tree
from .words import Letter, SymbolicWord, parse_symbolic, parse_word, reduce

__version__ = "0.1.0"

__all__ = [
    "FiniteGraph",
    "LeveledFamily",
    "Letter",
    "RootedTree",
    "SymbolicWord",
    "builtin",
    "chord_index",
    "comb_tree",
    "normal_spanning_tree",
    "parse_symbolic",
    "parse_word",
    "reduce",
]
