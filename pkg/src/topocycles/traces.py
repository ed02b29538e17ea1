"""Edge walks, their chord traces and the explicit loop constructions:
the Euler tour of a tree, loops realising given chord coordinates, and the
loop that runs out along a chord ray twice.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cyclespace import FiniteEdgeFunction
from .graphs import FiniteGraph, LeveledFamily, OrientedEdge, Vertex, end_approximations
from .spanning import ChordIndex, RootedTree
from .words import AscRay, ChordRay, Letter, SymbolicWord, Word


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class Walk:
    """Vertices v_0..v_m and the oriented edges between them."""

    vertices: tuple
    steps: tuple[OrientedEdge, ...]

    @classmethod
    def from_steps(cls, g: FiniteGraph, start: Vertex, steps: Iterable[OrientedEdge]) -> "Walk":
        vs = [start]
        steps = tuple(steps)
        for oe in steps:
            if oe.edge not in g.edge_map:
                raise WalkError(f"unknown edge {oe.edge!r}")
            a, b = g.endpoints(oe)
            if a != vs[-1]:
                raise WalkError(f"step {oe} does not start at {vs[-1]!r}")
            vs.append(b)
        return cls(tuple(vs), steps)

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def reverse(self) -> "Walk":
        return Walk(self.vertices[::-1], tuple(oe.reverse() for oe in reversed(self.steps)))

    def concat(self, other: "Walk") -> "Walk":
        if self.end != other.start:
            raise WalkError("walks do not meet")
        return Walk(self.vertices + other.vertices[1:], self.steps + other.steps)

    def sub(self, i: int, j: int) -> "Walk":
        """The part of the walk between vertex positions i and j."""
        return Walk(self.vertices[i : j + 1], self.steps[i:j])

    def splice(self, position: int, loop: "Walk") -> "Walk":
        if not loop.closed or loop.start != self.vertices[position]:
            raise WalkError("spliced walk must be a loop at the splice vertex")
        return self.sub(0, position).concat(loop).concat(self.sub(position, len(self)))

    def to_json(self) -> dict:
        return {"start": self.start, "steps": [{"edge": oe.edge, "forward": oe.forward} for oe in self.steps]}

    @classmethod
    def from_json(cls, g: FiniteGraph, data: Mapping) -> "Walk":
        steps = [OrientedEdge(str(d["edge"]), bool(d.get("forward", True))) for d in data["steps"]]
        return cls.from_steps(g, data["start"], steps)


def path_walk(g: FiniteGraph, start: Vertex, steps: Sequence[OrientedEdge]) -> Walk:
    return Walk.from_steps(g, start, steps)


def pass_counts(w: Walk) -> dict[str, tuple[int, int]]:
    """edge -> (passes in natural direction, passes against it)."""
    fwd: Counter = Counter()
    bwd: Counter = Counter()
    for oe in w.steps:
        (fwd if oe.forward else bwd)[oe.edge] += 1
    return {e: (fwd[e], bwd[e]) for e in set(fwd) | set(bwd)}


def net_traversal(w: Walk) -> FiniteEdgeFunction:
    return FiniteEdgeFunction({e: f - b for e, (f, b) in pass_counts(w).items()})


def trace(w: Walk, t: RootedTree, idx: ChordIndex) -> Word:
    """Chord letters in traversal order; tree edges are skipped."""
    out = []
    for oe in w.steps:
        k = idx.position.get(oe.edge)
        if k is not None:
            out.append(Letter(k, oe.forward))
        elif oe.edge not in t.tree_edges:
            raise WalkError(f"edge {oe.edge!r} is neither a tree edge nor an indexed chord")
    return tuple(out)


def abelianize(w: Iterable[Letter]) -> dict[int, int]:
    net: Counter = Counter()
    for a in w:
        net[a.index] += 1 if a.forward else -1
    return {k: v for k, v in sorted(net.items()) if v}


def tree_walk(t: RootedTree, u: Vertex, v: Vertex) -> Walk:
    return Walk.from_steps(t.host, u, t.path(u, v))


def euler_tour(t: RootedTree) -> Walk:
    """Closed walk from the root passing every tree edge once each way,
    children visited in (level, id) order."""
    g = t.host
    steps: list[OrientedEdge] = []
    stack = [(t.root, iter(t.children[t.root]))]
    while stack:
        v, it = stack[-1]
        child = next(it, None)
        if child is None:
            stack.pop()
            if stack:
                steps.append(g.oriented_from(v, t.parent[v][1]))
            continue
        steps.append(g.oriented_from(v, t.parent[child][1]))
        stack.append((child, iter(t.children[child])))
    return Walk.from_steps(g, t.root, steps)


def circuit_walk(t: RootedTree, idx: ChordIndex, k: int) -> Walk:
    """Fundamental circuit of chord k as a loop at the chord's tail."""
    g = t.host
    e = g.edge(idx[k])
    return Walk.from_steps(g, e.tail, [OrientedEdge(e.id, True)] + t.path(e.head, e.tail))


def realize_as_loop(coords: Mapping[int, int], t: RootedTree, idx: ChordIndex, fam: LeveledFamily, depth: int) -> Walk:
    """Euler tour of ``t`` with |c| copies of circuit k (reversed when c < 0)
    spliced in at the first visit of the chord's tail."""
    g = t.host
    inner = fam.ball(depth - 1).vertex_set if depth >= 1 else frozenset()
    tour = euler_tour(t)
    first_visit: dict[Vertex, int] = {}
    for i, v in enumerate(tour.vertices):
        first_visit.setdefault(v, i)
    inserts: dict[int, list[Walk]] = {}
    for k in sorted(coords):
        c = coords[k]
        if not c:
            continue
        if not 0 <= k < len(idx):
            raise WalkError(f"chord {k} is not in the tree's chord index")
        e = g.edge(idx[k])
        if e.tail not in inner or e.head not in inner:
            raise WalkError(f"chord {k} ({e.id}) lies outside ball({depth - 1})")
        loop = circuit_walk(t, idx, k)
        if c < 0:
            loop = loop.reverse()
        inserts.setdefault(first_visit[e.tail], []).extend([loop] * abs(c))
    walk = tour
    for pos in sorted(inserts, reverse=True):
        for loop in reversed(inserts[pos]):
            walk = walk.splice(pos, loop)
    return walk


def ray_chords(ray: ChordRay, idx: ChordIndex, g: FiniteGraph) -> list[int]:
    """Ray chords i_0, i_1, ... present with both endpoints in ``g``; stops
    at the first missing one."""
    out = []
    j = 0
    while True:
        k = ray.index(j)
        if k >= len(idx):
            break
        e = g.edge_map.get(idx[k])
        if e is None:
            break
        out.append(k)
        j += 1
    return out


def verify_ray(fam: LeveledFamily, t: RootedTree, idx: ChordIndex, ray: ChordRay, depth: int) -> list[tuple[int, str, Vertex]]:
    """Certificate that the ray chords converge to the named end: for each
    offset j, the higher endpoint of chord i_j lies in the depth-min(j, depth)
    class of the end approximation that contains the end's reference vertex.

    Returns (offset, chord id, endpoint) triples; raises on failure.
    """
    approx = end_approximations(fam, depth)
    g = t.host
    out = []
    for j, k in enumerate(ray_chords(ray, idx, g)):
        e = g.edge(idx[k])
        hi = max((e.tail, e.head), key=g.level)
        d = min(j, depth)
        if d >= 1:
            ref = fam.end_vertex(ray.end, max(d, g.level(hi)))
            if ref is None:
                raise WalkError(f"family {fam.name} has no end labelled {ray.end!r}")
            ci = approx.class_of(d, ref)
            if ci is None or hi not in approx.classes[d][ci]:
                raise WalkError(f"chord {idx[k]} does not lie in the depth-{d} class of end {ray.end!r}")
            if ci not in approx.persistent[d]:
                raise WalkError(f"depth-{d} class of end {ray.end!r} does not persist")
        out.append((j, idx[k], hi))
    return out


def rho_walk(fam: LeveledFamily, t: RootedTree, idx: ChordIndex, ray: ChordRay, depth: int) -> tuple[Walk, SymbolicWord]:
    """Traverse the ray chords inside ball(depth-1) forwards, then the same
    chords backwards in the same order, joined by tree paths."""
    inner = fam.ball(depth - 1)
    ks = ray_chords(ray, idx, inner)
    if len(ks) < 2:
        raise WalkError(f"ray has fewer than two chords inside ball({depth - 1})")
    verify_ray(fam, t, idx, ray, depth)
    g = t.host
    es = [g.edge(idx[k]) for k in ks]
    start = es[0].tail
    steps: list[OrientedEdge] = []
    here = start
    for forward in (True, False):
        for e in es:
            a, b = (e.tail, e.head) if forward else (e.head, e.tail)
            steps.extend(t.path(here, a))
            steps.append(OrientedEdge(e.id, forward))
            here = b
    steps.extend(t.path(here, start))
    word = SymbolicWord(ray, (AscRay(0, True), AscRay(0, False)))
    return Walk.from_steps(g, start, steps), word


def homotopy_variants(w: Walk, t: RootedTree, seed: int, moves: int | None = None) -> Walk:
    """Insert random backtracks (an edge and straight back) and tree
    detours (a tree path out and back) into ``w``."""
    rng = random.Random(seed)
    g = t.host
    n_moves = rng.randint(1, 5) if moves is None else moves
    for _ in range(n_moves):
        pos = rng.randrange(len(w.vertices))
        v = w.vertices[pos]
        if rng.random() < 0.5 and g.incidence[v]:
            eid, _ = rng.choice(g.incidence[v])
            oe = g.oriented_from(v, eid)
            loop = Walk.from_steps(g, v, [oe, oe.reverse()])
        else:
            target = rng.choice(g.vertices)
            if target == v:
                continue
            out = tree_walk(t, v, target)
            loop = out.concat(out.reverse())
        w = w.splice(pos, loop)
    return w


def random_walk(g: FiniteGraph, start: Vertex, length: int, rng: random.Random) -> Walk:
    steps = []
    v = start
    for _ in range(length):
        eid, _ = rng.choice(g.incidence[v])
        oe = g.oriented_from(v, eid)
        steps.append(oe)
        v = g.endpoints(oe)[1]
    return Walk.from_steps(g, start, steps)
