"""Finite-depth Čech computations.

For a normal spanning tree and the down-closed set T_n of vertices at tree
depth at most n, the contraction graph G_n collapses every component of the
ball minus T_n to a point.  The cover below lives on a subdivided model of
the ball; its nerve is a subdivision of G_n, so its first Betti number is
the number of chords with an endpoint in T_n.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Mapping, Sequence

from .graphs import Edge, FiniteGraph, LeveledFamily, Vertex, components, id_key
from .linalg import matmul, smith_normal_form
from .spanning import ChordIndex, RootedTree, chords_meeting

Cell = tuple  # ("v", vertex) or ("e", edge id, position)


def tree_levels(t: RootedTree, n: int) -> frozenset:
    """T_n: vertices at tree depth <= n."""
    return frozenset(v for v, d in t.depth.items() if d <= n)


def _check_tree(fam: LeveledFamily, t: RootedTree, n: int, depth: int) -> FiniteGraph:
    if n < 0:
        raise ValueError("n must be non-negative")
    if depth < n + 2:
        raise ValueError(f"depth {depth} too small for n={n}; need depth >= n+2")
    g = fam.ball(depth)
    if t.host != g:
        raise ValueError("tree is not a spanning tree of ball(depth)")
    return g


@dataclass(frozen=True)
class ContractionGraph:
    graph: FiniteGraph
    vertex_map: dict  # original vertex -> vertex of graph
    edge_origin: dict  # edge id of graph -> original edge id
    contracted: tuple[frozenset, ...]  # component of ball - T_n for each "[Ck]"


def contraction_graph(fam: LeveledFamily, t: RootedTree, n: int, depth: int) -> ContractionGraph:
    g = _check_tree(fam, t, n, depth)
    core = tree_levels(t, n)
    comps = tuple(components(g, core))
    vmap: dict = {v: v for v in core}
    levels = {v: g.level(v) for v in core}
    for i, c in enumerate(comps):
        name = f"[C{i}]"
        for v in c:
            vmap[v] = name
        levels[name] = min(g.level(v) for v in c)
    edges = []
    for e in g.edges:
        a, b = vmap[e.tail], vmap[e.head]
        if a != b:
            edges.append(Edge(e.id, a, b))
    h = FiniteGraph(tuple(levels), tuple(edges), levels)
    return ContractionGraph(h, vmap, {e.id: e.id for e in edges}, comps)


def h1_rank(g: FiniteGraph) -> int:
    if not g.is_connected():
        raise ValueError("graph is not connected")
    return len(g.edges) - len(g.vertices) + 1


@dataclass(frozen=True)
class CoverSet:
    name: str
    cells: frozenset


def build_cover(fam: LeveledFamily, t: RootedTree, n: int, m: int, depth: int) -> list[CoverSet]:
    """Cover of the ball with every edge cut into 2m+1 cells.

    Sets: a star per vertex of T_n (the vertex and the first cell of each
    edge leaving it), m segments of three cells along each edge with an end
    in T_n (consecutive segments share one cell), and one set per
    component C of ball - T_n holding everything in C together with the far
    cells of the edges joining C to T_n.
    """
    if m < 2:
        raise ValueError("need at least two segments per edge")
    g = _check_tree(fam, t, n, depth)
    core = tree_levels(t, n)
    comps = components(g, core)
    owner = {v: i for i, c in enumerate(comps) for v in c}
    last = 2 * m

    stars: dict[Vertex, set] = {v: {("v", v)} for v in sorted(core, key=id_key)}
    outer: list[set] = [{("v", v) for v in c} for c in comps]
    segments: list[CoverSet] = []
    for e in g.edges:
        inside = (e.tail in core, e.head in core)
        if not any(inside):
            outer[owner[e.tail]].update(("e", e.id, i) for i in range(last + 1))
            continue
        near, far = (e.tail, e.head) if inside[0] else (e.head, e.tail)
        stars[near].add(("e", e.id, 0 if near == e.tail else last))
        far_cell = ("e", e.id, last if near == e.tail else 0)
        if far in core:
            stars[far].add(far_cell)
        else:
            outer[owner[far]].add(far_cell)
        for i in range(1, m + 1):
            cells = {("e", e.id, j) for j in (2 * i - 2, 2 * i - 1, 2 * i)}
            segments.append(CoverSet(f"seg:{e.id}:{i}", frozenset(cells)))
    out = [CoverSet(f"star:{v}", frozenset(c)) for v, c in stars.items()]
    out += segments
    out += [CoverSet(f"end:{i}", frozenset(c)) for i, c in enumerate(outer)]
    return out


def model_cells(g: FiniteGraph, m: int) -> frozenset:
    cells = {("v", v) for v in g.vertices}
    cells.update(("e", e.id, i) for e in g.edges for i in range(2 * m + 1))
    return frozenset(cells)


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    def boundary_1(self) -> list[list[int]]:
        d = [[0] * len(self.edges) for _ in self.vertices]
        for j, (a, b) in enumerate(self.edges):
            d[a][j] -= 1
            d[b][j] += 1
        return d

    def boundary_2(self) -> list[list[int]]:
        pos = {e: i for i, e in enumerate(self.edges)}
        d = [[0] * len(self.triangles) for _ in self.edges]
        for j, (a, b, c) in enumerate(self.triangles):
            d[pos[(b, c)]][j] += 1
            d[pos[(a, c)]][j] -= 1
            d[pos[(a, b)]][j] += 1
        return d


def nerve(cover: Sequence[CoverSet]) -> SimplicialComplex:
    """Nerve up to dimension 2."""
    members: dict[Hashable, list[int]] = {}
    for i, s in enumerate(cover):
        for c in s.cells:
            members.setdefault(c, []).append(i)
    edges: set = set()
    tris: set = set()
    for ids in members.values():
        ids = sorted(set(ids))
        edges.update(combinations(ids, 2))
        tris.update(combinations(ids, 3))
    return SimplicialComplex(tuple(s.name for s in cover), tuple(sorted(edges)), tuple(sorted(tris)))


def betti1(k: SimplicialComplex) -> int:
    d1, d2 = k.boundary_1(), k.boundary_2()
    if k.triangles and any(any(row) for row in matmul(d1, d2)):
        raise ArithmeticError("boundary of boundary is nonzero")
    r1 = smith_normal_form(d1, transforms=False, ncols=len(k.edges)).rank
    r2 = smith_normal_form(d2, transforms=False, ncols=len(k.triangles)).rank
    return len(k.edges) - r1 - r2


def torsion(k: SimplicialComplex) -> tuple[int, ...]:
    """Torsion coefficients of H_1 (invariant factors of the 2-boundary above 1)."""
    return smith_normal_form(k.boundary_2(), transforms=False, ncols=len(k.triangles)).torsion


def restriction_map(fam: LeveledFamily, t: RootedTree, idx: ChordIndex, n: int) -> Callable[[Mapping[int, int]], dict[int, int]]:
    """Projection onto the chords with an endpoint in T_n."""
    keep = set(chords_meeting(t, idx, tree_levels(t, n)))

    def restrict(coords: Mapping[int, int]) -> dict[int, int]:
        return {k: c for k, c in coords.items() if k in keep and c}

    return restrict


def inverse_limit_element(coords: Mapping[int, int], fam: LeveledFamily, t: RootedTree, idx: ChordIndex, depth: int) -> list[dict[int, int]]:
    """The restrictions of ``coords`` to levels 0..depth, checked to be
    compatible under the restriction maps."""
    maps = [restriction_map(fam, t, idx, n) for n in range(depth + 1)]
    out = [r(coords) for r in maps]
    for n in range(depth):
        if maps[n](out[n + 1]) != out[n]:
            raise AssertionError(f"levels {n} and {n + 1} are not compatible")
    return out


@dataclass(frozen=True)
class LevelReport:
    n: int
    chords: int
    nerve_betti1: int
    contraction_rank: int
    torsion: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "level": self.n,
            "chords": self.chords,
            "nerve_betti1": self.nerve_betti1,
            "contraction_rank": self.contraction_rank,
            "torsion": list(self.torsion),
        }


def level_report(fam: LeveledFamily, n: int, m: int, depth: int | None = None) -> LevelReport:
    from .spanning import chord_index, normal_spanning_tree

    depth = n + 2 if depth is None else depth
    t = normal_spanning_tree(fam, depth)
    idx = chord_index(t)
    k = nerve(build_cover(fam, t, n, m, depth))
    return LevelReport(
        n,
        len(chords_meeting(t, idx, tree_levels(t, n))),
        betti1(k),
        h1_rank(contraction_graph(fam, t, n, depth).graph),
        torsion(k),
    )
