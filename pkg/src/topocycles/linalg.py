"""Exact integer linear algebra: Smith normal form and ranks over GF(2)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a or not b:
        return [[] for _ in a]
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def shape(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else (ncols or 0))


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = len(a)
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SNFResult:
    """``left @ A @ right == diagonal`` with unimodular ``left``/``right``.

    ``invariants`` are the nonzero diagonal entries, each dividing the next.
    The transforms are None when not requested.
    """

    diagonal: Matrix
    invariants: tuple[int, ...]
    left: Matrix | None
    right: Matrix | None

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


def smith_normal_form(a: Sequence[Sequence[int]], transforms: bool = True, ncols: int | None = None) -> SNFResult:
    """Smith normal form by elimination with a minimal-magnitude pivot.

    ``ncols`` gives the column count for matrices with no rows.
    """
    rows, cols = shape(a, ncols)
    d = [list(map(int, r)) for r in a]
    left = identity(rows) if transforms else None
    right = identity(cols) if transforms else None

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        if left is not None:
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        if right is not None:
            for r in right:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        rs, rd = d[src], d[dst]
        for c in range(t, cols):
            if rs[c]:
                rd[c] -= q * rs[c]
        if left is not None:
            ls, ld = left[src], left[dst]
            for c in range(rows):
                if ls[c]:
                    ld[c] -= q * ls[c]

    def add_col(src, dst, q):  # col dst -= q * col src
        for r in range(t, rows):
            if d[r][src]:
                d[r][dst] -= q * d[r][src]
        if right is not None:
            for r in right:
                if r[src]:
                    r[dst] -= q * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            ri = d[i]
            for j in range(t, cols):
                x = ri[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            done = True
            for i in range(t + 1, rows):
                if d[i][t]:
                    q = d[i][t] // p
                    add_row(t, i, q)
                    if d[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if d[t][j]:
                    q = d[t][j] // p
                    add_col(t, j, q)
                    if d[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(d[i][t]), i, t) for i in range(t, rows) if d[i][t]]
                cand += [(abs(d[t][j]), t, j) for j in range(t, cols) if d[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: the pivot must divide every remaining entry
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, -1)  # row t += row i, then re-eliminate
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            if left is not None:
                left[t] = [-x for x in left[t]]
        t += 1
    inv = tuple(d[i][i] for i in range(min(rows, cols)) if d[i][i])
    return SNFResult(d, inv, left, right)


def int_rank(a: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return smith_normal_form(a, transforms=False, ncols=ncols).rank


def gf2_rank(vectors: Iterable[int | Sequence[int]]) -> int:
    """Rank over GF(2) of bitmasks or 0/1 sequences."""
    basis: dict[int, int] = {}
    for v in vectors:
        if not isinstance(v, int):
            v = sum(1 << i for i, x in enumerate(v) if x % 2)
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                break
    return len(basis)
