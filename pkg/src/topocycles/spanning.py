"""Normal spanning trees, chord enumeration, fundamental circuits and tree cuts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .graphs import FiniteGraph, LeveledFamily, OrientedEdge, Vertex, components, id_key


class NonNormalTreeError(ValueError):
    pass


@dataclass(frozen=True)
class RootedTree:
    """A spanning tree of ``host`` given by parent links.

    ``parent`` maps every non-root vertex to ``(parent vertex, edge id)``.
    """

    host: FiniteGraph
    root: Vertex
    parent: Mapping[Vertex, tuple[Vertex, str]]

    def __post_init__(self):
        if self.root not in self.host.vertex_set:
            raise ValueError(f"root {self.root!r} is not a host vertex")
        for v, (p, eid) in self.parent.items():
            e = self.host.edge(eid)
            if {e.tail, e.head} != {v, p}:
                raise ValueError(f"parent edge {eid!r} does not join {v!r} and {p!r}")
        if set(self.parent) | {self.root} != set(self.host.vertices) or self.root in self.parent:
            raise ValueError("parent map does not span the host")
        for v in self.host.vertices:  # acyclic: every chain reaches the root
            seen = set()
            while v != self.root:
                if v in seen:
                    raise ValueError("parent map has a cycle")
                seen.add(v)
                v = self.parent[v][0]

    def __hash__(self):
        return hash((self.host, self.root, tuple(sorted(self.parent.items(), key=lambda kv: id_key(kv[0])))))

    def __eq__(self, other):
        return (
            isinstance(other, RootedTree)
            and self.host == other.host
            and self.root == other.root
            and dict(self.parent) == dict(other.parent)
        )

    @cached_property
    def tree_edges(self) -> frozenset[str]:
        return frozenset(eid for _, eid in self.parent.values())

    @cached_property
    def chord_edges(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.host.edges if e.id not in self.tree_edges)

    @cached_property
    def children(self) -> dict[Vertex, tuple[Vertex, ...]]:
        kids: dict[Vertex, list] = {v: [] for v in self.host.vertices}
        for v, (p, _) in self.parent.items():
            kids[p].append(v)
        key = lambda v: (self.host.level(v), id_key(v))
        return {v: tuple(sorted(ks, key=key)) for v, ks in kids.items()}

    @cached_property
    def depth(self) -> dict[Vertex, int]:
        """Distance from the root inside the tree."""
        out = {self.root: 0}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                out[c] = out[v] + 1
                stack.append(c)
        return out

    def ancestors(self, v: Vertex) -> list[Vertex]:
        """Root-to-v path as a vertex list."""
        path = [v]
        while v != self.root:
            v = self.parent[v][0]
            path.append(v)
        return path[::-1]

    def le(self, u: Vertex, v: Vertex) -> bool:
        d = self.depth
        if d[u] > d[v]:
            return False
        while d[v] > d[u]:
            v = self.parent[v][0]
        return u == v

    def path(self, u: Vertex, v: Vertex) -> list[OrientedEdge]:
        """Oriented tree edges of the unique u-v path, in walking order."""
        d = self.depth
        up: list[OrientedEdge] = []
        down: list[OrientedEdge] = []
        a, b = u, v
        while a != b:
            if d[a] >= d[b]:
                p, eid = self.parent[a]
                up.append(self.host.oriented_from(a, eid))
                a = p
            else:
                p, eid = self.parent[b]
                down.append(self.host.oriented_from(p, eid))
                b = p
        return up + down[::-1]

    def subtree(self, v: Vertex) -> set:
        out = {v}
        stack = [v]
        while stack:
            for c in self.children[stack.pop()]:
                out.add(c)
                stack.append(c)
        return out

    def non_normal_edges(self) -> list[str]:
        """Chords whose endpoints are incomparable in the tree order."""
        bad = []
        for eid in self.chord_edges:
            e = self.host.edge(eid)
            if not (self.le(e.tail, e.head) or self.le(e.head, e.tail)):
                bad.append(eid)
        return bad

    def is_normal(self) -> bool:
        return not self.non_normal_edges()

    def restrict(self, g: FiniteGraph) -> "RootedTree":
        """The tree induced on a subgraph that contains the root and is
        closed under taking parents."""
        parent = {v: pe for v, pe in self.parent.items() if v in g.vertex_set}
        return RootedTree(g, self.root, parent)

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "parent": [
                {"vertex": v, "parent": p, "edge": eid}
                for v, (p, eid) in sorted(self.parent.items(), key=lambda kv: id_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, host: FiniteGraph, data: Mapping) -> "RootedTree":
        return cls(host, data["root"], {d["vertex"]: (d["parent"], d["edge"]) for d in data["parent"]})


def dfs_tree(g: FiniteGraph, root: Vertex) -> RootedTree:
    """Depth-first search tree; neighbours are tried in (level, id) order."""
    parent: dict[Vertex, tuple[Vertex, str]] = {}
    visited = {root}
    stack = [(root, iter(g.incidence[root]))]
    while stack:
        v, it = stack[-1]
        for eid, w in it:
            if w not in visited:
                visited.add(w)
                parent[w] = (v, eid)
                stack.append((w, iter(g.incidence[w])))
                break
        else:
            stack.pop()
    if len(visited) != len(g.vertices):
        raise ValueError("graph is not connected")
    return RootedTree(g, root, parent)


@lru_cache(maxsize=256)
def normal_spanning_tree(fam: LeveledFamily, depth: int) -> RootedTree:
    """DFS tree of ``fam.ball(depth)`` from the family root.

    Raises NonNormalTreeError if some chord joins incomparable vertices.
    """
    t = dfs_tree(fam.ball(depth), fam.root)
    bad = t.non_normal_edges()
    if bad:
        raise NonNormalTreeError(f"{fam.name}: chords {bad} join incomparable vertices")
    return t


def check_depth_stability(fam: LeveledFamily, depth: int) -> list[Vertex]:
    """Vertices of ball(depth-1) whose parent link changes between the trees
    at depth-1 and depth (empty when stable)."""
    small = normal_spanning_tree(fam, depth - 1)
    big = normal_spanning_tree(fam, depth)
    return [v for v, pe in small.parent.items() if big.parent.get(v) != pe]


def comb_tree(fam: LeveledFamily, depth: int) -> RootedTree:
    """For the one-sided ladder: the upper stile plus all rungs, so that every
    lower stile edge is a chord.  This tree is *not* normal."""
    g = fam.ball(depth)
    parent: dict[Vertex, tuple[Vertex, str]] = {}
    for v in g.vertices:
        if v == fam.root:
            continue
        s = str(v)
        n = int(s.lstrip("v'"))
        if s.startswith("v'"):
            parent[v] = (f"v'{n - 1}", f"e'{n - 1}") if n > 0 else ("v0", "f0")
        else:
            parent[v] = (f"v'{n}", f"f{n}")
    return RootedTree(g, fam.root, parent)


@dataclass(frozen=True)
class ChordIndex:
    """Chords e_0, e_1, ... ordered by (level of higher endpoint, edge id)."""

    chords: tuple[str, ...]

    @cached_property
    def position(self) -> dict[str, int]:
        return {c: k for k, c in enumerate(self.chords)}

    def __len__(self) -> int:
        return len(self.chords)

    def __getitem__(self, k: int) -> str:
        return self.chords[k]

    def index_of(self, edge_id: str) -> int:
        return self.position[edge_id]


def chord_index(t: RootedTree) -> ChordIndex:
    g = t.host

    def key(eid):
        e = g.edge(eid)
        return (max(g.level(e.tail), g.level(e.head)), id_key(eid))

    return ChordIndex(tuple(sorted(t.chord_edges, key=key)))


def tree_le(t: RootedTree, u: Vertex, v: Vertex) -> bool:
    return t.le(u, v)


def fundamental_circuit(t: RootedTree, idx: ChordIndex, k: int):
    """The oriented circuit of chord e_k: +1 on the chord, then the tree path
    from its head back to its tail."""
    from .cyclespace import FiniteEdgeFunction

    if not 0 <= k < len(idx):
        raise IndexError(f"chord index {k} out of range")
    e = t.host.edge(idx[k])
    values = {e.id: 1}
    for oe in t.path(e.head, e.tail):
        values[oe.edge] = 1 if oe.forward else -1
    return FiniteEdgeFunction(values)


def chords_meeting(t: RootedTree, idx: ChordIndex, vertices: Iterable[Vertex]) -> list[int]:
    vs = set(vertices)
    out = []
    for k, eid in enumerate(idx.chords):
        e = t.host.edge(eid)
        if e.tail in vs or e.head in vs:
            out.append(k)
    return out


@dataclass(frozen=True)
class Cut:
    """The oriented cut E(side, V - side), each edge directed out of ``side``."""

    side: frozenset
    edges: tuple[OrientedEdge, ...]

    def reverse(self, g: FiniteGraph) -> "Cut":
        """The same edge set directed out of the complementary side."""
        return Cut(g.vertex_set - self.side, tuple(oe.reverse() for oe in self.edges))

    def to_json(self) -> dict:
        return {
            "side": sorted(self.side, key=id_key),
            "edges": [{"edge": oe.edge, "forward": oe.forward} for oe in self.edges],
        }


def cut_of(g: FiniteGraph, side: Iterable[Vertex]) -> Cut:
    side = frozenset(side)
    out = []
    for e in g.edges:
        if (e.tail in side) != (e.head in side):
            out.append(OrientedEdge(e.id, e.tail in side))
    return Cut(side, tuple(out))


def down_closed_sets(t: RootedTree, size_bound: int, allowed: set | None = None) -> list[frozenset]:
    """All down-closed vertex sets (rooted subtrees) with at most
    ``size_bound`` vertices, drawn from ``allowed``."""
    if size_bound < 1:
        return []
    ok = (lambda v: True) if allowed is None else (lambda v: v in allowed)
    out: list[frozenset] = []

    def grow(current: list, ext: list):
        out.append(frozenset(current))
        if len(current) == size_bound:
            return
        for i, v in enumerate(ext):
            grow(current + [v], ext[i + 1:] + [c for c in t.children[v] if ok(c)])

    grow([t.root], [c for c in t.children[t.root] if ok(c)])
    return out


def tree_cuts(fam: LeveledFamily, t: RootedTree, depth: int, size_bound: int) -> list[Cut]:
    """Cuts E(C, V - C) for every down-closed S of size <= size_bound inside
    ball(depth-1) and every component C of ball(depth) - S."""
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    g = fam.ball(depth)
    if t.host != g:
        raise ValueError("tree is not a spanning tree of ball(depth)")
    inner = {v for v in g.vertices if g.level(v) <= depth - 1}
    seen: set = set()
    out: list[Cut] = []
    for s in down_closed_sets(t, size_bound, inner):
        for comp in components(g, s):
            c = cut_of(g, comp)
            key = frozenset(c.edges)
            if c.edges and key not in seen:
                seen.add(key)
                out.append(c)
    return out


def chords_within(idx: ChordIndex, g: FiniteGraph) -> set[int]:
    """Indices of chords that are edges of the subgraph ``g``."""
    return {k for k, eid in enumerate(idx.chords) if eid in g.edge_map}
