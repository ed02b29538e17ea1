"""Integer 1-chains of edge walks, the traversal-count homomorphism to edge
functions, and replayable certificates that a chain is a boundary.

A certificate is a list of items whose formal sums are boundaries for
elementary reasons (subdividing a walk, a pass plus its reverse, splitting a
loop out of a walk).  Replaying it adds those sums to the source chain; the
chain is certified when nothing is left.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, ClassVar, Hashable, Iterable, Mapping, Sequence

from .cyclespace import FiniteEdgeFunction
from .graphs import FiniteGraph, LeveledFamily, OrientedEdge, Vertex, builtin, id_key
from .linalg import gf2_rank
from .traces import Walk, net_traversal


@dataclass(frozen=True)
class Chain1:
    terms: tuple[tuple[int, Walk], ...] = ()

    def __post_init__(self):
        for c, w in self.terms:
            if not w.steps:
                raise ValueError("chains use walks with at least one step")

    @classmethod
    def of(cls, *pairs: tuple[int, Walk]) -> "Chain1":
        return cls(tuple(pairs))

    def __add__(self, other: "Chain1") -> "Chain1":
        return Chain1(self.terms + other.terms)

    def __neg__(self) -> "Chain1":
        return Chain1(tuple((-c, w) for c, w in self.terms))

    def __sub__(self, other: "Chain1") -> "Chain1":
        return self + (-other)

    def formal(self) -> Counter:
        """Like terms combined: walk -> coefficient (zeros dropped)."""
        out: Counter = Counter()
        for c, w in self.terms:
            out[w] += c
        return Counter({w: c for w, c in out.items() if c})

    def to_json(self) -> dict:
        return {"terms": [{"coef": c, "walk": w.to_json()} for c, w in self.terms]}

    @classmethod
    def from_json(cls, g: FiniteGraph, data: Mapping) -> "Chain1":
        return cls(tuple((int(d["coef"]), Walk.from_json(g, d["walk"])) for d in data["terms"]))


def boundary(c: Chain1) -> dict[Vertex, int]:
    out: Counter = Counter()
    for coef, w in c.terms:
        out[w.end] += coef
        out[w.start] -= coef
    return {v: x for v, x in out.items() if x}


class NonZeroBoundary(ValueError):
    pass


@dataclass(frozen=True)
class SymbolicChain:
    """Sum of chains z_j over an infinite index set.

    ``indices(n)`` lists the first n indices in a fixed enumeration;
    ``support(v)`` is the declared finite set of indices whose walks meet v
    (None when no support is declared).
    """

    term: Callable[[Hashable], Chain1]
    indices: Callable[[int], Sequence[Hashable]]
    support: Callable[[Vertex], Iterable[Hashable]] | None = None
    family: LeveledFamily | None = None
    cycle: bool = True


def _meets(c: Chain1, v: Vertex) -> bool:
    return any(v in w.vertices for _, w in c.terms)


def f_hom(c: Chain1 | SymbolicChain, depth: int | None = None) -> FiniteEdgeFunction:
    """Net traversal of every edge, weighted by coefficients.

    For a symbolic chain the value on an edge of ball(depth) sums only the
    declared terms at its endpoints.
    """
    if isinstance(c, SymbolicChain):
        return _f_hom_symbolic(c, depth)
    if boundary(c):
        raise NonZeroBoundary(f"chain has boundary {boundary(c)}")
    return _net(c)


def _net(c: Chain1) -> FiniteEdgeFunction:
    out: Counter = Counter()
    for coef, w in c.terms:
        for e, v in net_traversal(w).values.items():
            out[e] += coef * v
    return FiniteEdgeFunction(dict(out))


def _f_hom_symbolic(sc: SymbolicChain, depth: int | None) -> FiniteEdgeFunction:
    if sc.support is None or sc.family is None or depth is None:
        raise ValueError("symbolic chains need a declared support, a family and a depth")
    if not sc.cycle:
        raise NonZeroBoundary("symbolic chain is not declared to be a cycle")
    g = sc.family.ball(depth)
    cache: dict = {}
    out = {}
    for e in g.edges:
        total = 0
        for j in set(sc.support(e.tail)) | set(sc.support(e.head)):
            if j not in cache:
                z = sc.term(j)
                if boundary(z):
                    raise NonZeroBoundary(f"term {j!r} has nonzero boundary")
                cache[j] = _net(z)
            total += cache[j].value(e.id)
        out[e.id] = total
    return FiniteEdgeFunction(out)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Subdivide:
    """coef * (walk[:split] + walk[split:] - walk)."""

    coef: int
    walk: Walk
    split: int
    kind: ClassVar[str] = "subdivide"

    def formal(self) -> Counter:
        w = self.walk
        return _combine([(self.coef, w.sub(0, self.split)), (self.coef, w.sub(self.split, len(w))), (-self.coef, w)])


@dataclass(frozen=True)
class Pair:
    """coef * (pass + reverse pass) for a single-edge walk."""

    coef: int
    walk: Walk
    kind: ClassVar[str] = "pair"

    def formal(self) -> Counter:
        return _combine([(self.coef, self.walk), (self.coef, self.walk.reverse())])


@dataclass(frozen=True)
class Splice:
    """coef * (walk[:start] + walk[start:end] + walk[end:] - walk) where the
    middle piece is a closed loop."""

    coef: int
    walk: Walk
    start: int
    end: int
    kind: ClassVar[str] = "splice"

    def formal(self) -> Counter:
        w = self.walk
        parts = [(self.coef, w.sub(0, self.start)), (self.coef, w.sub(self.start, self.end)), (self.coef, w.sub(self.end, len(w))), (-self.coef, w)]
        return _combine([(c, p) for c, p in parts if p.steps])


def _combine(pairs: Iterable[tuple[int, Walk]]) -> Counter:
    out: Counter = Counter()
    for c, w in pairs:
        out[w] += c
    return Counter({w: c for w, c in out.items() if c})


Item = Subdivide | Pair | Splice


@dataclass(frozen=True)
class BoundaryCertificate:
    items: tuple = ()

    def __add__(self, other: "BoundaryCertificate") -> "BoundaryCertificate":
        return BoundaryCertificate(self.items + other.items)

    def to_json(self) -> dict:
        out = []
        for it in self.items:
            d = {"kind": it.kind, "coef": it.coef, "walk": it.walk.to_json()}
            if isinstance(it, Subdivide):
                d["split"] = it.split
            elif isinstance(it, Splice):
                d["start"], d["end"] = it.start, it.end
            out.append(d)
        return {"items": out}

    @classmethod
    def from_json(cls, g: FiniteGraph, data: Mapping) -> "BoundaryCertificate":
        items = []
        for d in data["items"]:
            w = Walk.from_json(g, d["walk"])
            kind = d["kind"]
            if kind == "subdivide":
                items.append(Subdivide(int(d["coef"]), w, int(d["split"])))
            elif kind == "pair":
                items.append(Pair(int(d["coef"]), w))
            elif kind == "splice":
                items.append(Splice(int(d["coef"]), w, int(d["start"]), int(d["end"])))
            else:
                raise ValueError(f"unknown certificate item kind {kind!r}")
        return cls(tuple(items))


class CertificateError(ValueError):
    pass


def check_item(item) -> None:
    """Structural check: the item's formal sum has zero boundary and zero
    net traversal, and its shape is legal."""
    w = item.walk
    if isinstance(item, Subdivide):
        if not 0 < item.split < len(w):
            raise CertificateError("subdivision point must be interior")
    elif isinstance(item, Pair):
        if len(w) != 1:
            raise CertificateError("paired passes must be single edges")
    elif isinstance(item, Splice):
        if not (0 <= item.start < item.end <= len(w)) or w.vertices[item.start] != w.vertices[item.end]:
            raise CertificateError("spliced piece must be a closed sub-walk")
    formal = item.formal()
    chain = Chain1(tuple((c, x) for x, c in formal.items()))
    if boundary(chain) or not _net(chain).is_zero():
        raise CertificateError(f"{item.kind} item is not a boundary")


def replay(source: Chain1 | Counter, cert: BoundaryCertificate) -> Counter:
    """Add every item's sum to the source; returns the resulting formal sum."""
    rest = Counter(source.formal() if isinstance(source, Chain1) else source)
    for item in cert.items:
        check_item(item)
        for w, c in item.formal().items():
            rest[w] += c
    return Counter({w: c for w, c in rest.items() if c})


def verify_certificate(z: Chain1, cert: BoundaryCertificate) -> bool:
    try:
        return not replay(z, cert)
    except CertificateError:
        return False


def subdivide_chain(c: Chain1) -> tuple[Chain1, BoundaryCertificate]:
    """Cut every walk into single-edge walks.

    Replaying the certificate on ``c`` leaves exactly the returned chain.
    """
    items = []
    out = []
    for coef, w in c.terms:
        rest = w
        while len(rest) > 1:
            items.append(Subdivide(coef, rest, 1))
            out.append((coef, rest.sub(0, 1)))
            rest = rest.sub(1, len(rest))
        out.append((coef, rest))
    return Chain1(tuple(out)), BoundaryCertificate(tuple(items))


class NotABoundary(ValueError):
    def __init__(self, edge: str, value: int):
        super().__init__(f"traversal count {value} on edge {edge}")
        self.edge = edge
        self.value = value


def certify_boundary(z: Chain1) -> BoundaryCertificate:
    """Subdivide, then match the forward and backward passes of each edge.

    Raises NotABoundary with a witness edge when some edge has nonzero net
    traversal.
    """
    if boundary(z):
        raise NonZeroBoundary(f"chain has boundary {boundary(z)}")
    f = _net(z)
    if not f.is_zero():
        e = min(f.values, key=id_key)
        raise NotABoundary(e, f.values[e])
    pieces, cert = subdivide_chain(z)
    left = pieces.formal()
    by_edge: dict[str, dict[bool, int]] = {}
    walks: dict[str, Walk] = {}
    for w, c in left.items():
        oe = w.steps[0]
        by_edge.setdefault(oe.edge, {True: 0, False: 0})[oe.forward] += c
        if oe.forward:
            walks[oe.edge] = w
        else:
            walks.setdefault(oe.edge, w.reverse())
    pairs = []
    for e in sorted(by_edge, key=id_key):
        a, b = by_edge[e][True], by_edge[e][False]
        if a != b:  # cannot happen when the net traversal vanishes
            raise AssertionError(f"unbalanced passes on {e}")
        w = walks[e] if walks[e].steps[0].forward else walks[e].reverse()
        sign = -1 if a > 0 else 1
        pairs.extend(Pair(sign, w) for _ in range(abs(a)))
    return cert + BoundaryCertificate(tuple(pairs))


def h1_dimension_f2(g: FiniteGraph) -> int:
    """|E| - |V| + 1, checked against |E| - rank of the incidence matrix
    over GF(2)."""
    if not g.is_connected():
        raise ValueError("graph is not connected")
    pos = {v: i for i, v in enumerate(g.vertices)}
    rank = gf2_rank((1 << pos[e.tail]) | (1 << pos[e.head]) for e in g.edges)
    h = len(g.edges) - len(g.vertices) + 1
    if len(g.edges) - rank != h:
        raise AssertionError("cycle rank disagrees with the incidence rank")
    return h


# ---------------------------------------------------------------------------
# standard representations


@dataclass(frozen=True)
class Valid:
    depth: int
    sampled: int
    ok: ClassVar[bool] = True

    def to_json(self):
        return {"verdict": "Valid", "depth": self.depth, "sampled": self.sampled}


@dataclass(frozen=True)
class NotLocallyFinite:
    vertex: Vertex
    growth: tuple[int, ...]
    checkpoints: tuple[int, ...]
    ok: ClassVar[bool] = False

    def to_json(self):
        return {"verdict": "NotLocallyFinite", "vertex": self.vertex, "growth": list(self.growth), "checkpoints": list(self.checkpoints)}


@dataclass(frozen=True)
class NotCycles:
    index: Hashable
    ok: ClassVar[bool] = False

    def to_json(self):
        return {"verdict": "NotCycles", "index": self.index}


@dataclass(frozen=True)
class SupportViolation:
    vertex: Vertex
    index: Hashable
    ok: ClassVar[bool] = False

    def to_json(self):
        return {"verdict": "SupportViolation", "vertex": self.vertex, "index": self.index}


def validate_standard_representation(sc: SymbolicChain, depth: int, sample_budget: int = 40):
    """Sampled checks of a presentation as a sum of finite cycles:
    (a) sampled terms have zero boundary, (b) declared supports are
    respected, (c) the number of sampled terms meeting a vertex of
    ball(depth) does not keep growing over four checkpoints.  Vertices are
    scanned root-first."""
    if sc.family is None:
        raise ValueError("symbolic chain needs a family")
    idxs = list(sc.indices(sample_budget))
    terms = [sc.term(j) for j in idxs]
    for j, z in zip(idxs, terms):
        if boundary(z):
            return NotCycles(j)
    g = sc.family.ball(depth)
    if sc.support is not None:
        for v in g.vertices:
            declared = set(sc.support(v))
            for j, z in zip(idxs, terms):
                if j not in declared and _meets(z, v):
                    return SupportViolation(v, j)
    n = len(idxs)
    checkpoints = tuple(sorted({max(1, n * q // 4) for q in (1, 2, 3, 4)}))
    for v in sorted(g.vertices, key=lambda x: (g.level(x), id_key(x))):
        hits = [_meets(z, v) for z in terms]
        growth = tuple(sum(hits[:c]) for c in checkpoints)
        if len(growth) >= 4 and all(a < b for a, b in zip(growth, growth[1:])):
            return NotLocallyFinite(v, growth, checkpoints)
    return Valid(depth, n)


def _z_order(n: int) -> list[int]:
    """0, -1, 1, -2, 2, ... (first n)."""
    return [(i + 1) // 2 * (1 if i % 2 == 0 else -1) if i else 0 for i in range(n)]


def psi_chain() -> SymbolicChain:
    """The double ladder's squares z_n = e_n + f_{n+1} - e'_n - f_n as
    single-edge walks."""
    fam = builtin("double_ladder")

    def term(n: int) -> Chain1:
        g = fam.ball(abs(n) + 1)
        one = lambda start, eid: Walk.from_steps(g, start, [OrientedEdge(eid, True)])
        return Chain1.of(
            (1, one(f"v{n}", f"e{n}")),
            (1, one(f"v{n + 1}", f"f{n + 1}")),
            (-1, one(f"v'{n}", f"e'{n}")),
            (-1, one(f"v{n}", f"f{n}")),
        )

    def support(v) -> tuple[int, ...]:
        m = int(str(v).lstrip("v'"))
        return (m - 1, m)

    return SymbolicChain(term, _z_order, support, fam)


def zline_segment(m: int, n: int) -> Walk:
    """The walk from m to n (m < n) along the integer line."""
    fam = builtin("zline")
    g = fam.ball(max(abs(m), abs(n)))
    return Walk.from_steps(g, m, [OrientedEdge(f"z{i}", True) for i in range(m, n)])


def cancelling_boundaries_chain() -> SymbolicChain:
    """Right-hand side of the integer-line example: term 2i is
    s(-(i+1), i) + s(i, i+1) - s(-(i+1), i+1) and term 2i+1 is
    s(-(i+2), -(i+1)) + s(-(i+1), i+1) - s(-(i+2), i+1).  No support is
    declared; every term passes through 0."""

    def term(j: int) -> Chain1:
        i, odd = divmod(j, 2)
        s = zline_segment
        if not odd:
            return Chain1.of((1, s(-(i + 1), i)), (1, s(i, i + 1)), (-1, s(-(i + 1), i + 1)))
        return Chain1.of((1, s(-(i + 2), -(i + 1))), (1, s(-(i + 1), i + 1)), (-1, s(-(i + 2), i + 1)))

    return SymbolicChain(term, lambda n: list(range(n)), None, builtin("zline"))
