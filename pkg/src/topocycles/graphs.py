"""Finite multigraphs and locally finite infinite graphs given by truncation balls.

An infinite graph is never materialised.  A :class:`LeveledFamily` knows its
root, the level of every vertex and the edges at every vertex; ``ball(n)`` is
the finite graph induced on the vertices of level at most ``n``.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Hashable, Iterable, Mapping

Vertex = Hashable

_TRAILING_INT = re.compile(r"(.*?)(-?\d+)")


def id_key(x: Any) -> tuple:
    """Total order on vertex and edge ids: ints first, then strings with a
    trailing signed integer compared numerically ("v-2" < "v1" < "v10")."""
    if isinstance(x, bool):
        return (2, str(x))
    if isinstance(x, int):
        return (0, x, "", 0, "")
    s = str(x)
    m = _TRAILING_INT.fullmatch(s)
    if m:
        return (1, 0, m.group(1), int(m.group(2)), s)
    return (1, 0, s, 0, s)


@dataclass(frozen=True)
class Edge:
    id: str
    tail: Vertex
    head: Vertex


@dataclass(frozen=True, order=False)
class OrientedEdge:
    """An edge with one of its two directions; ``forward`` is the natural one."""

    edge: str
    forward: bool = True

    def reverse(self) -> "OrientedEdge":
        return OrientedEdge(self.edge, not self.forward)

    def __str__(self) -> str:
        return ("+" if self.forward else "-") + str(self.edge)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGraph:
    """Finite multigraph without loops.

    ``levels`` is optional; vertices missing from it have level 0.
    """

    vertices: tuple
    edges: tuple[Edge, ...]
    levels: Mapping[Vertex, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices), key=id_key))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: id_key(e.id))))
        vset = set(vs)
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.tail == e.head:
                raise GraphError(f"loop at {e.tail!r} (edge {e.id!r})")
            if e.tail not in vset or e.head not in vset:
                raise GraphError(f"edge {e.id!r} uses an undeclared vertex")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[tuple], levels: Mapping | None = None) -> "FiniteGraph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges), dict(levels or {}))

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def incidence(self) -> dict[Vertex, tuple[tuple[str, Vertex], ...]]:
        """vertex -> ((edge id, other endpoint), ...) sorted by the other
        endpoint's level, its id, then the edge id."""
        inc: dict[Vertex, list] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.tail].append((e.id, e.head))
            inc[e.head].append((e.id, e.tail))
        return {
            v: tuple(sorted(lst, key=lambda p: (self.level(p[1]), id_key(p[1]), id_key(p[0]))))
            for v, lst in inc.items()
        }

    def level(self, v: Vertex) -> int:
        return self.levels.get(v, 0)

    def degree(self, v: Vertex) -> int:
        return len(self.incidence[v])

    def edge(self, edge_id: str) -> Edge:
        return self.edge_map[edge_id]

    def endpoints(self, oe: OrientedEdge) -> tuple[Vertex, Vertex]:
        """(start, end) of an oriented edge."""
        e = self.edge_map[oe.edge]
        return (e.tail, e.head) if oe.forward else (e.head, e.tail)

    def oriented_from(self, v: Vertex, edge_id: str) -> OrientedEdge:
        e = self.edge_map[edge_id]
        if e.tail == v:
            return OrientedEdge(edge_id, True)
        if e.head == v:
            return OrientedEdge(edge_id, False)
        raise GraphError(f"{v!r} is not an endpoint of {edge_id!r}")

    def induced(self, keep: Iterable[Vertex]) -> "FiniteGraph":
        keep = set(keep)
        return FiniteGraph(
            tuple(keep),
            tuple(e for e in self.edges if e.tail in keep and e.head in keep),
            {v: l for v, l in self.levels.items() if v in keep},
        )

    def is_connected(self) -> bool:
        return len(components(self, ())) <= 1

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "level": self.level(v)} for v in self.vertices],
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteGraph":
        try:
            vs = [d["id"] for d in data["vertices"]]
            levels = {d["id"]: int(d.get("level", 0)) for d in data["vertices"]}
            es = [Edge(str(d["id"]), d["tail"], d["head"]) for d in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls(tuple(vs), tuple(es), levels)


def components(g: FiniteGraph, removed: Iterable[Vertex]) -> list[frozenset]:
    """Connected components of ``g`` minus ``removed``, ordered by their
    smallest vertex id."""
    removed = set(removed)
    seen: set = set()
    out = []
    for start in g.vertices:
        if start in removed or start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for _, w in g.incidence[v]:
                if w not in removed and w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


# ---------------------------------------------------------------------------
# Leveled families


def _parse(v: str, prefixes: tuple[str, ...]) -> tuple[str, int]:
    m = _TRAILING_INT.fullmatch(str(v))
    if not m or m.group(1) not in prefixes:
        raise GraphError(f"not a vertex of this family: {v!r}")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True)
class LeveledFamily:
    """A connected locally finite graph presented by its truncation balls.

    Subclasses provide ``root``, ``level`` and ``incident``; balls are built
    generically, so coherence between depths holds by construction.
    """

    name: str
    params: tuple = ()

    root: Any = None

    def level(self, v: Vertex) -> int:
        raise NotImplementedError

    def incident(self, v: Vertex) -> list[Edge]:
        """All edges at ``v`` in the infinite graph."""
        raise NotImplementedError

    def ball(self, n: int) -> FiniteGraph:
        if n < 0:
            raise ValueError("depth must be non-negative")
        return _ball(self, n)

    def end_vertex(self, label: str, level: int) -> Vertex | None:
        """A vertex of the given level on a fixed ray towards the named end,
        or None if the family has no such end label."""
        return None

    def address(self, depth: int) -> str:
        return f"family:{self.name}?depth={depth}"


@lru_cache(maxsize=512)
def _ball(fam: LeveledFamily, n: int) -> FiniteGraph:
    levels = {fam.root: fam.level(fam.root)}
    edges: dict[str, Edge] = {}
    queue = deque([fam.root])
    while queue:
        v = queue.popleft()
        for e in fam.incident(v):
            w = e.head if e.tail == v else e.tail
            lw = fam.level(w)
            if lw > n:
                continue
            edges[e.id] = e
            if w not in levels:
                levels[w] = lw
                queue.append(w)
    return FiniteGraph(tuple(levels), tuple(edges.values()), levels)


@dataclass(frozen=True)
class Ray(LeveledFamily):
    name: str = "ray"
    root: Any = 0

    def level(self, v):
        if not isinstance(v, int) or v < 0:
            raise GraphError(f"not a vertex of ray: {v!r}")
        return v

    def incident(self, v):
        self.level(v)
        out = [Edge(f"r{v}", v, v + 1)]
        if v > 0:
            out.append(Edge(f"r{v - 1}", v - 1, v))
        return out

    def end_vertex(self, label, level):
        return level if label in ("+", "") else None


@dataclass(frozen=True)
class ZLine(LeveledFamily):
    """The integers with an edge z{i} from i to i+1."""

    name: str = "zline"
    root: Any = 0

    def level(self, v):
        if not isinstance(v, int):
            raise GraphError(f"not a vertex of zline: {v!r}")
        return abs(v)

    def incident(self, v):
        self.level(v)
        return [Edge(f"z{v - 1}", v - 1, v), Edge(f"z{v}", v, v + 1)]

    def end_vertex(self, label, level):
        return {"+": level, "-": -level}.get(label)


@dataclass(frozen=True)
class DoubleLadder(LeveledFamily):
    """Vertices v{n}, v'{n} (n an integer); e{n}: v{n}->v{n+1},
    e'{n}: v'{n}->v'{n+1}, f{n}: v{n}->v'{n}.  Level is |n|, so each rung
    sits on a single level; ``one_sided`` keeps only n >= 0."""

    name: str = "double_ladder"
    root: Any = "v0"
    one_sided: bool = False

    def _check(self, v):
        side, n = _parse(v, ("v", "v'"))
        if self.one_sided and n < 0:
            raise GraphError(f"not a vertex of ladder: {v!r}")
        return side, n

    def level(self, v):
        return abs(self._check(v)[1])

    def incident(self, v):
        side, n = self._check(v)
        s = "" if side == "v" else "'"
        out = [Edge(f"e{s}{n}", f"v{s}{n}", f"v{s}{n + 1}"), Edge(f"f{n}", f"v{n}", f"v'{n}")]
        if n > 0 or not self.one_sided:
            out.append(Edge(f"e{s}{n - 1}", f"v{s}{n - 1}", f"v{s}{n}"))
        return out

    def end_vertex(self, label, level):
        if label == "+" or (label == "" and self.one_sided):
            return f"v{level}"
        if label == "-" and not self.one_sided:
            return f"v{-level}"
        return None


@dataclass(frozen=True)
class BinaryTree(LeveledFamily):
    """Heap-numbered binary tree: t{k} has children t{2k}, t{2k+1} and the
    edge a{k} runs from t{k//2} to t{k}.

    With ``doubled`` each a{k} gets a parallel path t{k//2} -p{k}-> s{k}
    -q{k}-> t{k} through a new vertex s{k} of the same level as t{k}.
    """

    name: str = "binary_tree"
    root: Any = "t1"
    doubled: bool = False

    def _check(self, v):
        kind, k = _parse(v, ("t", "s") if self.doubled else ("t",))
        if k < 1 or (kind == "s" and k < 2):
            raise GraphError(f"not a vertex of {self.name}: {v!r}")
        return kind, k

    def level(self, v):
        return self._check(v)[1].bit_length() - 1

    def incident(self, v):
        kind, k = self._check(v)
        if kind == "s":
            return [Edge(f"p{k}", f"t{k // 2}", f"s{k}"), Edge(f"q{k}", f"s{k}", f"t{k}")]
        out = []
        for c in (2 * k, 2 * k + 1):
            out.append(Edge(f"a{c}", f"t{k}", f"t{c}"))
            if self.doubled:
                out.append(Edge(f"p{c}", f"t{k}", f"s{c}"))
        if k > 1:
            out.append(Edge(f"a{k}", f"t{k // 2}", f"t{k}"))
            if self.doubled:
                out.append(Edge(f"q{k}", f"s{k}", f"t{k}"))
        return out

    def end_vertex(self, label, level):
        # ends are named by a string of L/R turns; the label is repeated
        # periodically ("L" is the leftmost ray)
        if not label or set(label) - {"L", "R"}:
            return None
        k = 1
        for i in range(level):
            k = 2 * k + (label[i % len(label)] == "R")
        return f"t{k}"


@dataclass(frozen=True)
class FiniteFamily(LeveledFamily):
    """A finite connected graph; levels are distances from the root."""

    name: str = "finite"
    graph: FiniteGraph | None = None
    root: Any = None

    def __post_init__(self):
        if self.graph is None or not self.graph.vertices:
            raise GraphError("finite family needs a non-empty graph")
        if self.root is None:
            object.__setattr__(self, "root", self.graph.vertices[0])
        if self.root not in self.graph.vertex_set:
            raise GraphError(f"root {self.root!r} not in graph")
        if not self.graph.is_connected():
            raise GraphError("finite family graph must be connected")
        dist = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for _, w in self.graph.incidence[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        object.__setattr__(self, "_dist", dist)

    def __hash__(self):
        return hash((self.name, self.graph.vertices, self.graph.edges, self.root))

    def level(self, v):
        try:
            return self._dist[v]
        except KeyError:
            raise GraphError(f"not a vertex of the finite graph: {v!r}") from None

    def incident(self, v):
        self.level(v)
        return [self.graph.edge(eid) for eid, _ in self.graph.incidence[v]]


# a few named finite graphs for the CLI and tests
def named_graph(name: str) -> FiniteGraph:
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", name)
    if not m:
        raise GraphError(f"unknown graph name {name!r}")
    kind, k = m.group(1), int(m.group(2))
    vs = list(range(k))
    if kind == "K":
        es = [(f"k{i}_{j}", i, j) for i in range(k) for j in range(i + 1, k)]
    elif kind == "C" and k >= 2:
        es = [(f"c{i}", i, (i + 1) % k) for i in range(k)]
    elif kind == "P" and k >= 1:
        es = [(f"p{i}", i, i + 1) for i in range(k - 1)]
    elif kind == "S" and k >= 1:
        es = [(f"s{i}", 0, i) for i in range(1, k + 1)]
        vs = list(range(k + 1))
    else:
        raise GraphError(f"unknown graph name {name!r}")
    return FiniteGraph.build(vs, es)


FAMILY_NAMES = ("ray", "zline", "ladder", "double_ladder", "binary_tree", "binary_tree_doubled", "finite")


def builtin(name: str, **params) -> LeveledFamily:
    """Instantiate a builtin family.

    ``finite`` takes ``graph`` (a FiniteGraph or a name such as "K4", "C5",
    "P3", "S3") and optionally ``root``.  The other families take no
    parameters.
    """
    if name == "finite":
        graph = params.pop("graph", None)
        root = params.pop("root", None)
        if isinstance(graph, str):
            graph = named_graph(graph)
        if params:
            raise GraphError(f"unexpected parameters for finite: {sorted(params)}")
        return FiniteFamily(graph=graph, root=root)
    if params:
        raise GraphError(f"family {name!r} takes no parameters, got {sorted(params)}")
    makers: dict[str, Callable[[], LeveledFamily]] = {
        "ray": Ray,
        "zline": ZLine,
        "ladder": lambda: DoubleLadder(name="ladder", one_sided=True),
        "double_ladder": DoubleLadder,
        "binary_tree": BinaryTree,
        "binary_tree_doubled": lambda: BinaryTree(name="binary_tree_doubled", doubled=True),
    }
    if name not in makers:
        raise GraphError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")
    return makers[name]()


def parse_family_address(address: str) -> tuple[LeveledFamily, int | None]:
    """Parse "family:name?depth=n" (the depth part is optional)."""
    m = re.fullmatch(r"family:([a-z_]+)(?:\?depth=(\d+))?", address.strip())
    if not m:
        raise GraphError(f"malformed family address {address!r}")
    depth = int(m.group(2)) if m.group(2) is not None else None
    return builtin(m.group(1)), depth


def load_graph(text: str) -> FiniteGraph:
    return FiniteGraph.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# End approximations


@dataclass(frozen=True)
class EndApproximation:
    """Component tree of the graph beyond successive balls.

    ``classes[d]`` lists the components of ``ball(depth + 1)`` minus
    ``ball(d - 1)`` for d = 1..depth (vertices of level >= d).  A class is
    persistent when it still reaches level ``depth + 1``.
    """

    depth: int
    classes: dict[int, list[frozenset]]
    parent: dict[tuple[int, int], int]
    persistent: dict[int, list[int]]

    def branch_count(self, d: int) -> int:
        return len(self.persistent[d])

    @property
    def end_count(self) -> int:
        return self.branch_count(self.depth)

    def class_of(self, d: int, v: Vertex) -> int | None:
        for i, c in enumerate(self.classes[d]):
            if v in c:
                return i
        return None


def end_approximations(fam: LeveledFamily, depth: int) -> EndApproximation:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    top = fam.ball(depth + 1)
    classes: dict[int, list[frozenset]] = {}
    parent: dict[tuple[int, int], int] = {}
    persistent: dict[int, list[int]] = {}
    for d in range(1, depth + 1):
        inner = [v for v in top.vertices if top.level(v) < d]
        classes[d] = components(top, inner)
        persistent[d] = [
            i for i, c in enumerate(classes[d]) if any(top.level(v) == depth + 1 for v in c)
        ]
        if d > 1:
            for i, c in enumerate(classes[d]):
                owners = [j for j, p in enumerate(classes[d - 1]) if c <= p]
                if len(owners) != 1:
                    raise AssertionError("component tree property failed")
                parent[(d, i)] = owners[0]
    return EndApproximation(depth, classes, parent, persistent)
