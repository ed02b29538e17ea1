"""Words in chord letters: free reduction, permanence, restriction to finite
index sets, and symbolic infinite words built from ray atoms.

A symbolic word is a finite sequence of atoms over one chord ray.  An
``AscRay`` atom lists the ray's chords from some offset on in increasing
order (order type omega); a ``DescRay`` atom lists the same letters in
decreasing order (order type omega*).  Everything about such a word is read
off its finite restrictions.
"""
from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import ClassVar, Iterable, Sequence, Union

MAX_ORACLE_LENGTH = 10


@dataclass(frozen=True, order=True)
class Letter:
    index: int
    forward: bool = True

    def inverse(self) -> "Letter":
        return Letter(self.index, not self.forward)

    def __str__(self) -> str:
        return f"{'+' if self.forward else '-'}{self.index}"


Word = tuple  # tuple[Letter, ...]


def parse_word(text: str) -> Word:
    out = []
    for tok in text.split():
        m = re.fullmatch(r"([+-])(\d+)", tok)
        if not m:
            raise ValueError(f"bad letter token {tok!r}")
        out.append(Letter(int(m.group(2)), m.group(1) == "+"))
    return tuple(out)


def format_word(w: Iterable[Letter]) -> str:
    return " ".join(str(a) for a in w)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple(a.inverse() for a in reversed(w))


def reduce(w: Sequence[Letter]) -> Word:
    stack: list[Letter] = []
    for a in w:
        if stack and stack[-1] == a.inverse():
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i + 1] != w[i].inverse() for i in range(len(w) - 1))


def multiply(a: Sequence[Letter], b: Sequence[Letter]) -> Word:
    return reduce(tuple(a) + tuple(b))


# ---------------------------------------------------------------------------
# reductions and permanence

Reduction = tuple  # tuple[tuple[int, int], ...]


class ReductionError(ValueError):
    pass


def replay_reduction(w: Sequence[Letter], red: Reduction) -> Word:
    """Apply the pairs of ``red`` in order and return the remaining word.

    Each pair must consist of inverse letters adjacent among the positions
    not yet deleted.
    """
    alive = list(range(len(w)))
    for s, t in red:
        if s not in alive or t not in alive:
            raise ReductionError(f"position reused in pair {(s, t)}")
        i, j = sorted((alive.index(s), alive.index(t)))
        if j != i + 1:
            raise ReductionError(f"pair {(s, t)} is not adjacent")
        if w[s] != w[t].inverse():
            raise ReductionError(f"pair {(s, t)} does not carry inverse letters")
        del alive[j]
        del alive[i]
    return tuple(w[p] for p in alive)


def all_reductions(w: Sequence[Letter]) -> list[Reduction]:
    """Every reduction of ``w``, including the empty one (exhaustive; only
    for words of length at most 10)."""
    if len(w) > MAX_ORACLE_LENGTH:
        raise ValueError(f"all_reductions is limited to words of length <= {MAX_ORACLE_LENGTH}")
    w = tuple(w)
    out: list[Reduction] = []

    def go(alive: tuple[int, ...], done: tuple):
        out.append(done)
        for i in range(len(alive) - 1):
            s, t = alive[i], alive[i + 1]
            if w[s] == w[t].inverse():
                go(alive[:i] + alive[i + 2:], done + ((s, t),))

    go(tuple(range(len(w))), ())
    return out


def oracle_residues(w: Sequence[Letter]) -> set[Word]:
    """Words left by the maximal reductions of ``w``."""
    w = tuple(w)
    res = set()
    for red in all_reductions(w):
        r = replay_reduction(w, red)
        if is_reduced(r):
            res.add(r)
    return res


def oracle_deleted_positions(w: Sequence[Letter]) -> set[int]:
    """Positions deleted by at least one reduction."""
    return {p for red in all_reductions(w) for pair in red for p in pair}


def permanent_positions(w: Sequence[Letter]) -> list[bool]:
    """s is non-permanent iff some s' carries the inverse letter and the
    subword strictly between them reduces to the empty word."""
    return [_partner(w, s) is None for s in range(len(w))]


def is_permanent(w: Sequence[Letter], s: int) -> bool:
    if not 0 <= s < len(w):
        raise IndexError(s)
    return permanent_positions(w)[s]


def _partner(w: Sequence[Letter], s: int) -> int | None:
    """A position that can cancel against s, nearest first to the right."""
    for direction in (1, -1):
        stack: list[Letter] = []
        t = s + direction
        while 0 <= t < len(w):
            if not stack and w[t] == w[s].inverse():
                return t
            a = w[t]
            if stack and stack[-1] == a.inverse():
                stack.pop()
            else:
                stack.append(a)
            t += direction
    return None


def restrict_finite(w: Sequence[Letter], I: Iterable[int]) -> Word:
    I = set(I)
    return tuple(a for a in w if a.index in I)


def cancellation_split(w2: Sequence[Letter], w0: Sequence[Letter]) -> tuple[Word, Word, Word]:
    """For reduced w2, w0 return (w2', w, w0') with w2 = w2' w,
    w0 = inverse(w) w0' and r(w2 w0) = w2' w0'."""
    w2, w0 = tuple(w2), tuple(w0)
    if not (is_reduced(w2) and is_reduced(w0)):
        raise ValueError("cancellation_split needs reduced words")
    m = 0
    while m < len(w2) and m < len(w0) and w2[len(w2) - 1 - m] == w0[m].inverse():
        m += 1
    return w2[: len(w2) - m], w2[len(w2) - m:], w0[m:]


# ---------------------------------------------------------------------------
# symbolic words


@dataclass(frozen=True)
class ChordRay:
    """Strictly increasing chord indices i_j = start + step * j.

    ``end`` names the end of the host family the chords converge to (see
    LeveledFamily.end_vertex); it is only used by certificate checks.
    """

    start: int = 0
    step: int = 1
    end: str = ""

    def __post_init__(self):
        if self.start < 0 or self.step < 1:
            raise ValueError("ray needs start >= 0 and step >= 1")

    def index(self, j: int) -> int:
        return self.start + self.step * j

    def offset_of(self, chord: int) -> int | None:
        q, r = divmod(chord - self.start, self.step)
        return q if r == 0 and q >= 0 else None

    def offsets_upto(self, max_chord: int, first: int = 0) -> range:
        """Offsets j >= first with i_j <= max_chord."""
        if max_chord < self.start:
            return range(first, first)
        return range(first, max(first, (max_chord - self.start) // self.step + 1))


@dataclass(frozen=True)
class Single:
    letter: Letter


@dataclass(frozen=True)
class AscRay:
    start: int = 0
    forward: bool = True


@dataclass(frozen=True)
class DescRay:
    start: int = 0
    forward: bool = True


Atom = Union[Single, AscRay, DescRay]


@dataclass(frozen=True)
class SymbolicWord:
    ray: ChordRay
    atoms: tuple = ()

    @classmethod
    def from_finite(cls, w: Sequence[Letter], ray: ChordRay = ChordRay()) -> "SymbolicWord":
        return cls(ray, tuple(Single(a) for a in w))

    def __add__(self, other: "SymbolicWord") -> "SymbolicWord":
        if self.ray != other.ray:
            raise ValueError("symbolic words over different rays")
        return SymbolicWord(self.ray, self.atoms + other.atoms)

    def unfold(self, I: Iterable[int]) -> list[tuple[Letter, tuple[int, int]]]:
        """Letters with chord index in I, each tagged (atom number, offset)
        (offset -1 for singles)."""
        I = set(I)
        out: list[tuple[Letter, tuple[int, int]]] = []
        top = max(I) if I else -1
        for n, atom in enumerate(self.atoms):
            if isinstance(atom, Single):
                if atom.letter.index in I:
                    out.append((atom.letter, (n, -1)))
                continue
            js = [j for j in self.ray.offsets_upto(top, atom.start) if self.ray.index(j) in I]
            if isinstance(atom, DescRay):
                js.reverse()
            out.extend((Letter(self.ray.index(j), atom.forward), (n, j)) for j in js)
        return out

    def to_text(self) -> str:
        head = f"ray start={self.ray.start} step={self.ray.step}" + (f" end={self.ray.end}" if self.ray.end else "")
        body = []
        for a in self.atoms:
            if isinstance(a, Single):
                body.append(str(a.letter))
            else:
                kind = "asc" if isinstance(a, AscRay) else "desc"
                body.append(f"{kind}({a.start},{'+' if a.forward else '-'})")
        return head + "; " + " ".join(body)


def parse_symbolic(text: str) -> SymbolicWord:
    """Parse "ray start=0 step=1 [end=+]; asc(0,+) -3 desc(2,-)".

    The header may also end with a newline instead of ';'.
    """
    head, sep, body = text.strip().replace("\n", ";", 1).partition(";")
    if not sep or not head.strip().startswith("ray"):
        raise ValueError("symbolic word needs a 'ray ...;' header")
    opts = dict(re.findall(r"(\w+)=(\S+)", head))
    try:
        ray = ChordRay(int(opts.get("start", 0)), int(opts.get("step", 1)), opts.get("end", ""))
    except ValueError as exc:
        raise ValueError(f"bad ray header: {exc}") from exc
    atoms: list = []
    for tok in body.split():
        m = re.fullmatch(r"(asc|desc)\((\d+),([+-])\)", tok)
        if m:
            cls = AscRay if m.group(1) == "asc" else DescRay
            atoms.append(cls(int(m.group(2)), m.group(3) == "+"))
        else:
            atoms.extend(Single(a) for a in parse_word(tok))
    return SymbolicWord(ray, tuple(atoms))


def restrict(w: Union[Sequence[Letter], SymbolicWord], I: Iterable[int]) -> Word:
    if isinstance(w, SymbolicWord):
        return tuple(a for a, _ in w.unfold(I))
    return restrict_finite(w, I)


def inverse_symbolic(w: SymbolicWord) -> SymbolicWord:
    flipped = []
    for a in reversed(w.atoms):
        if isinstance(a, Single):
            flipped.append(Single(a.letter.inverse()))
        elif isinstance(a, AscRay):
            flipped.append(DescRay(a.start, not a.forward))
        else:
            flipped.append(AscRay(a.start, not a.forward))
    return SymbolicWord(w.ray, tuple(flipped))


fig1_word = SymbolicWord(ChordRay(), (AscRay(0, True), DescRay(0, False)))
rho_word = SymbolicWord(ChordRay(), (AscRay(0, True), AscRay(0, False)))


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class EquivalentUpTo:
    depth: int
    ok: ClassVar[bool] = True

    def to_json(self):
        return {"verdict": "EquivalentUpTo", "depth": self.depth}


@dataclass(frozen=True)
class Distinct:
    n: int
    left: Word
    right: Word
    ok: ClassVar[bool] = False

    def to_json(self):
        return {"verdict": "Distinct", "n": self.n, "left": format_word(self.left), "right": format_word(self.right)}


@dataclass(frozen=True)
class ReducedUpTo:
    depth: int
    ok: ClassVar[bool] = True

    def to_json(self):
        return {"verdict": "ReducedUpTo", "depth": self.depth}


@dataclass(frozen=True)
class NotReduced:
    """Position ``position`` (atom number, offset) is deleted by a reduction
    of the restriction to chords 0..depth; ``partner`` cancels against it."""

    position: tuple[int, int]
    letter: Letter
    depth: int
    partner: tuple[int, int] | None
    ok: ClassVar[bool] = False

    def to_json(self):
        return {
            "verdict": "NotReduced",
            "position": list(self.position),
            "letter": str(self.letter),
            "depth": self.depth,
            "partner": list(self.partner) if self.partner else None,
        }


def equivalent(w1, w2, max_depth: int) -> EquivalentUpTo | Distinct:
    """Compare reduced restrictions to the prefix sets {0..n}, n <= max_depth."""
    for n in range(max_depth + 1):
        I = range(n + 1)
        a, b = reduce(restrict(w1, I)), reduce(restrict(w2, I))
        if a != b:
            return Distinct(n, a, b)
    return EquivalentUpTo(max_depth)


def is_reduced_symbolic(w: SymbolicWord, depth: int) -> ReducedUpTo | NotReduced:
    """Check permanence of every position with chord index <= depth.

    A position permanent in the restriction to some J stays permanent for
    every larger J, so the largest admissible set {0..depth} is the only
    one that needs checking.
    """
    tagged = w.unfold(range(depth + 1))
    letters = [a for a, _ in tagged]
    perm = permanent_positions(letters)
    for s, ok in enumerate(perm):
        if not ok:
            t = _partner(letters, s)
            return NotReduced(tagged[s][1], letters[s], depth, tagged[t][1] if t is not None else None)
    return ReducedUpTo(depth)


def inverse_system_element(w, depth: int) -> list[Word]:
    seq = [reduce(restrict(w, range(n + 1))) for n in range(depth + 1)]
    for n in range(depth + 1):
        for m in range(n + 1):
            if reduce(restrict_finite(seq[n], range(m + 1))) != seq[m]:
                raise AssertionError(f"restrictions incompatible at {m} <= {n}")
    return seq


def letter_use_bound(w, depth: int) -> dict[Letter, int]:
    bound: dict[Letter, int] = {}
    for r in inverse_system_element(w, depth):
        for a, c in Counter(r).items():
            bound[a] = max(bound.get(a, 0), c)
    return bound


# ---------------------------------------------------------------------------
# ascending-ray interval counts


def _as_symbolic(w) -> SymbolicWord:
    return w if isinstance(w, SymbolicWord) else SymbolicWord.from_finite(w)


def n_plus(w, k: int) -> int:
    """Number of intervals s_0 < s_1 < ... of positions carrying the forward
    letters of ray chords i_k, i_{k+1}, ... in turn.

    With finitely many atoms such an interval ends in the tail of an
    ascending forward atom: either it starts inside that atom (start <= k),
    or it starts at a run of consecutive Single atoms i_k, ..., i_{j-1}
    directly followed by AscRay(j, +).  A descending atom has no first
    element, so no interval can enter it from the left.
    """
    w = _as_symbolic(w)
    ray, atoms = w.ray, w.atoms
    count = 0
    for n, atom in enumerate(atoms):
        if isinstance(atom, AscRay):
            if atom.forward and atom.start <= k:
                count += 1
        elif isinstance(atom, Single) and atom.letter == Letter(ray.index(k), True):
            j, b = k + 1, n + 1
            while b < len(atoms):
                nxt = atoms[b]
                if isinstance(nxt, Single) and nxt.letter == Letter(ray.index(j), True):
                    j, b = j + 1, b + 1
                    continue
                if isinstance(nxt, AscRay) and nxt.forward and nxt.start == j:
                    count += 1
                break
    return count


def n_inv(w, k: int) -> int:
    """Signed count: n_plus(w, k) - n_plus(inverse(w), k)."""
    w = _as_symbolic(w)
    return n_plus(w, k) - n_plus(inverse_symbolic(w), k)


def N_word(w, k: int, depth: int | None = None) -> int:
    """The invariant of a reduced word at k; warns if the word is not
    reduced up to ``depth`` (default k + 4)."""
    w = _as_symbolic(w)
    d = depth if depth is not None else k + 4
    verdict = is_reduced_symbolic(w, w.ray.index(d))
    if not verdict.ok:
        warnings.warn(f"word is not reduced ({verdict.to_json()}); the count is not meaningful", stacklevel=2)
    return n_inv(w, k)


def subdivide_k(w1: SymbolicWord) -> int:
    """Offset k from which n(w1 w2, l) = n(w1, l) + n(w2, l) for all l >= k.

    If the first factor has a last position carrying chord c, pick k with
    i_k > c; if it has no last position (ends in an ascending atom or is
    empty) every k works.
    """
    if not w1.atoms:
        return 0
    last = w1.atoms[-1]
    ray = w1.ray
    if isinstance(last, AscRay):
        return 0
    c = last.letter.index if isinstance(last, Single) else ray.index(last.start)
    k = 0
    while ray.index(k) <= c:
        k += 1
    return k


def symbolic_cancellation_split(w2: SymbolicWord, w0: SymbolicWord) -> tuple[SymbolicWord, SymbolicWord, SymbolicWord]:
    """Atom-level analogue of cancellation_split: cancel trailing atoms of
    w2 against mirrored leading atoms of w0."""
    inv2 = inverse_symbolic(SymbolicWord(w2.ray, w2.atoms))
    m = 0
    while m < len(w2.atoms) and m < len(w0.atoms) and inv2.atoms[m] == w0.atoms[m]:
        m += 1
    cut = len(w2.atoms) - m
    return (
        SymbolicWord(w2.ray, w2.atoms[:cut]),
        SymbolicWord(w2.ray, w2.atoms[cut:]),
        SymbolicWord(w0.ray, w0.atoms[m:]),
    )
