"""Antisymmetric edge functions, thin sums and two membership tests for the
oriented topological cycle space.

Both tests are semi-decisions.  A ``Violates`` verdict is definitive; a
``PassesAtDepth`` verdict only says nothing went wrong up to the stated depth.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, ClassVar, Hashable, Iterable, Mapping

from .graphs import FiniteGraph, LeveledFamily, OrientedEdge, id_key
from .spanning import (
    ChordIndex,
    Cut,
    RootedTree,
    chord_index,
    fundamental_circuit,
    normal_spanning_tree,
    tree_cuts,
)


class EdgeFunction:
    """Integer function on oriented edges with f(e reversed) = -f(e).

    Only values on natural orientations are stored or computed.
    """

    def value(self, edge_id: str) -> int:
        raise NotImplementedError

    def query(self, oe: OrientedEdge) -> int:
        v = self.value(oe.edge)
        return v if oe.forward else -v

    def on_graph(self, g: FiniteGraph) -> "FiniteEdgeFunction":
        return FiniteEdgeFunction({e.id: self.value(e.id) for e in g.edges})

    def agrees_on(self, other: "EdgeFunction", edge_ids: Iterable[str]) -> bool:
        return all(self.value(e) == other.value(e) for e in edge_ids)


@dataclass(frozen=True, eq=False)
class FiniteEdgeFunction(EdgeFunction):
    values: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: int(v) for k, v in self.values.items() if v}
        object.__setattr__(self, "values", clean)

    def value(self, edge_id):
        return self.values.get(edge_id, 0)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.values)

    def __add__(self, other: "FiniteEdgeFunction") -> "FiniteEdgeFunction":
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return FiniteEdgeFunction(out)

    def __neg__(self):
        return FiniteEdgeFunction({k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c: int):
        return FiniteEdgeFunction({k: c * v for k, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, FiniteEdgeFunction) and self.values == other.values

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.values.items(), key=lambda kv: id_key(kv[0])))
        return f"FiniteEdgeFunction({{{body}}})"

    def is_zero(self) -> bool:
        return not self.values

    def to_json(self) -> dict:
        return {"kind": "finite", "values": {k: v for k, v in sorted(self.values.items(), key=lambda kv: id_key(kv[0]))}}


# closed-form rules per family, keyed by (family name, rule name)
_EDGE_ID = re.compile(r"([a-z]+'?)(-?\d+)")


def _prefix(edge_id: str) -> str:
    m = _EDGE_ID.fullmatch(edge_id)
    return m.group(1) if m else ""


def _ladder_rule(weights: dict[str, int]) -> Callable[[str], int]:
    return lambda eid: weights.get(_prefix(eid), 0)


RULES: dict[tuple[str, str], Callable[[str], int]] = {
    ("double_ladder", "psi"): _ladder_rule({"e": 1, "e'": -1}),
    ("double_ladder", "stiles-forward"): _ladder_rule({"e": 1}),
    ("double_ladder", "primed-stiles-forward"): _ladder_rule({"e'": 1}),
    ("ladder", "psi"): _ladder_rule({"e": 1, "e'": -1}),
    ("ladder", "stiles-forward"): _ladder_rule({"e": 1}),
    ("zline", "forward"): _ladder_rule({"z": 1}),
}


@dataclass(frozen=True)
class SymbolicEdgeFunction(EdgeFunction):
    family: str
    rule: str

    def __post_init__(self):
        if self.rule != "zero" and (self.family, self.rule) not in RULES:
            raise ValueError(f"no rule {self.rule!r} for family {self.family!r}")

    def value(self, edge_id):
        if self.rule == "zero":
            return 0
        return RULES[(self.family, self.rule)](edge_id)

    def to_json(self) -> dict:
        return {"kind": "symbolic", "family": self.family, "rule": self.rule}


def edge_function_from_json(data: Mapping) -> EdgeFunction:
    kind = data.get("kind")
    if kind == "finite":
        return FiniteEdgeFunction({str(k): int(v) for k, v in data.get("values", {}).items()})
    if kind == "symbolic":
        return SymbolicEdgeFunction(data["family"], data["rule"])
    raise ValueError(f"unknown edge function kind {kind!r}")


class ThinnessError(ValueError):
    pass


@dataclass(frozen=True)
class ThinFamily:
    """A family of edge functions with a declared finite support per edge.

    ``support(e)`` must contain every index whose term is nonzero on ``e``;
    ``probe(e)`` yields indices outside the support that are sampled to
    check that claim.
    """

    term: Callable[[Hashable], EdgeFunction]
    support: Callable[[str], Iterable[Hashable]]
    probe: Callable[[str], Iterable[Hashable]] = lambda e: ()

    @classmethod
    def finite(cls, terms: Iterable[EdgeFunction]) -> "ThinFamily":
        terms = tuple(terms)
        return cls(lambda i: terms[i], lambda e: range(len(terms)))


@dataclass(frozen=True, eq=False)
class ThinSum(EdgeFunction):
    family: ThinFamily

    def value(self, edge_id):
        fam = self.family
        support = set(fam.support(edge_id))
        for i in fam.probe(edge_id):
            if i not in support and fam.term(i).value(edge_id) != 0:
                raise ThinnessError(f"term {i!r} is nonzero on {edge_id!r} outside the declared support")
        return sum(fam.term(i).value(edge_id) for i in support)


def thin_sum(fam: ThinFamily) -> ThinSum:
    return ThinSum(fam)


def _ladder_index(edge_id: str) -> int:
    m = _EDGE_ID.fullmatch(edge_id)
    if not m:
        raise ValueError(f"not a ladder edge: {edge_id!r}")
    return int(m.group(2))


def square_cycle(n: int) -> FiniteEdgeFunction:
    """The oriented square of the double ladder between rungs f_n and f_{n+1}."""
    return FiniteEdgeFunction({f"e{n}": 1, f"f{n + 1}": 1, f"e'{n}": -1, f"f{n}": -1})


def psi_family() -> ThinFamily:
    """Squares z_n, n an integer; e_m and e'_m lie only in z_m, f_m in
    z_{m-1} and z_m."""

    def support(eid):
        m = _ladder_index(eid)
        return (m - 1, m) if _prefix(eid) == "f" else (m,)

    def probe(eid):
        m = _ladder_index(eid)
        return [m + d for d in (-3, -2, 1, 2, 3)]

    return ThinFamily(square_cycle, support, probe)


def cut_sum(phi: EdgeFunction, cut: Cut) -> int:
    return sum(phi.query(oe) for oe in cut.edges)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class PassesAtDepth:
    depth: int
    size_bound: int | None = None
    ok: ClassVar[bool] = True

    def to_json(self) -> dict:
        return {"verdict": "PassesAtDepth", "depth": self.depth, "size_bound": self.size_bound}


@dataclass(frozen=True)
class Violates:
    """``reason`` is "cut", "tree-edge" or "thinness"."""

    reason: str
    cut: Cut | None = None
    edge: str | None = None
    value: int | None = None
    expected: int | None = None
    growth: tuple[int, ...] = ()
    ok: ClassVar[bool] = False

    def to_json(self) -> dict:
        out: dict = {"verdict": "Violates", "reason": self.reason}
        if self.cut is not None:
            out["cut"] = self.cut.to_json()
        for k in ("edge", "value", "expected"):
            if getattr(self, k) is not None:
                out[k] = getattr(self, k)
        if self.growth:
            out["growth"] = list(self.growth)
        return out


@lru_cache(maxsize=64)
def _cached_cuts(fam: LeveledFamily, tree: RootedTree, depth: int, size_bound: int) -> tuple[Cut, ...]:
    return tuple(tree_cuts(fam, tree, depth, size_bound))


def membership_by_cuts(
    phi: EdgeFunction,
    fam: LeveledFamily,
    depth: int,
    size_bound: int,
    tree: RootedTree | None = None,
) -> PassesAtDepth | Violates:
    """Sum ``phi`` over every tree cut; the witness of a violation is
    oriented so that its sum is positive."""
    t = tree if tree is not None else normal_spanning_tree(fam, depth)
    g = fam.ball(depth)
    for c in _cached_cuts(fam, t, depth, size_bound):
        s = cut_sum(phi, c)
        if s:
            if s < 0:
                c, s = c.reverse(g), -s
            return Violates("cut", cut=c, value=s)
    return PassesAtDepth(depth, size_bound)


def chord_coordinates(phi: EdgeFunction, t: RootedTree, idx: ChordIndex) -> dict[int, int]:
    return {k: phi.value(eid) for k, eid in enumerate(idx.chords)}


@lru_cache(maxsize=64)
def _circuits(t: RootedTree, idx: ChordIndex) -> tuple[FiniteEdgeFunction, ...]:
    return tuple(fundamental_circuit(t, idx, k) for k in range(len(idx)))


def reconstruct_from_chords(coords: Mapping[int, int], t: RootedTree, idx: ChordIndex) -> FiniteEdgeFunction:
    circuits = _circuits(t, idx)
    out: dict[str, int] = {}
    for k, c in coords.items():
        if not c:
            continue
        for eid, v in circuits[k].values.items():
            out[eid] = out.get(eid, 0) + c * v
    return FiniteEdgeFunction(out)


def _support_counts(phi: EdgeFunction, t: RootedTree, edges: Iterable[str]) -> dict[str, int]:
    idx = chord_index(t)
    circuits = _circuits(t, idx)
    counts = {e: 0 for e in edges}
    for k, eid in enumerate(idx.chords):
        if phi.value(eid):
            for e in circuits[k].values:
                if e in counts:
                    counts[e] += 1
    return counts


def membership_by_reconstruction(
    phi: EdgeFunction,
    fam: LeveledFamily,
    depth: int,
    tree: RootedTree | None = None,
) -> PassesAtDepth | Violates:
    """Rebuild ``phi`` from its chord values and compare on tree edges.

    Thinness is flagged when the number of supported circuits through a tree
    edge of ball(depth-3) strictly increases over depths depth-2, depth-1,
    depth.
    """
    t = tree if tree is not None else normal_spanning_tree(fam, depth)
    idx = chord_index(t)
    g = t.host
    if depth >= 3:
        low = fam.ball(depth - 3)
        watched = [e.id for e in low.edges if e.id in t.tree_edges]
        trees = [t.restrict(fam.ball(d)) if tree is not None else normal_spanning_tree(fam, d) for d in (depth - 2, depth - 1)]
        trees.append(t)
        counts = [_support_counts(phi, tt, watched) for tt in trees]
        for e in watched:
            growth = tuple(c[e] for c in counts)
            if growth[0] < growth[1] < growth[2]:
                return Violates("thinness", edge=e, growth=growth)
    recon = reconstruct_from_chords(chord_coordinates(phi, t, idx), t, idx)
    inner = fam.ball(depth - 1) if depth >= 1 else g
    for e in inner.edges:
        if e.id in t.tree_edges and phi.value(e.id) != recon.value(e.id):
            return Violates("tree-edge", edge=e.id, value=phi.value(e.id), expected=recon.value(e.id))
    return PassesAtDepth(depth)


def mod2(phi: EdgeFunction, g: FiniteGraph | None = None) -> frozenset[str]:
    """Support of the parity of ``phi`` (the indicator of its image over
    GF(2)); symbolic functions need a graph to evaluate on."""
    if g is None:
        if not isinstance(phi, FiniteEdgeFunction):
            raise ValueError("a graph is needed to reduce a non-finite edge function")
        return frozenset(e for e, v in phi.values.items() if v % 2)
    return frozenset(e.id for e in g.edges if phi.value(e.id) % 2)
