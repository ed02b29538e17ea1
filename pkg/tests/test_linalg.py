import random

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from topocycles.linalg import determinant, gf2_rank, identity, int_rank, matmul, smith_normal_form


def random_matrix(rng, rows, cols, lo=-5, hi=5):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_examples():
    r = smith_normal_form(identity(3))
    assert r.diagonal == identity(3) and r.invariants == (1, 1, 1)
    assert smith_normal_form([[2, 0], [0, 3]]).invariants == (1, 6)
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0
    assert smith_normal_form([], ncols=3).rank == 0


def test_against_sympy_and_transforms():
    rng = random.Random(0)
    for _ in range(150):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        a = random_matrix(rng, rows, cols)
        r = smith_normal_form(a)
        assert matmul(matmul(r.left, a), r.right) == r.diagonal
        assert abs(determinant(r.left)) == 1 and abs(determinant(r.right)) == 1
        assert all(r.diagonal[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)
        inv = r.invariants
        assert all(b % a_ == 0 for a_, b in zip(inv, inv[1:]))
        m = sympy.Matrix(a)
        assert r.rank == m.rank()
        theirs = sympy_snf(m, domain=sympy.ZZ)
        assert sorted(abs(x) for x in theirs.diagonal() if x) == sorted(inv)


def test_rank_on_six_by_six():
    rng = random.Random(1)
    for _ in range(100):
        a = random_matrix(rng, 6, 6)
        assert int_rank(a) == sympy.Matrix(a).rank()
        assert determinant(a) == sympy.Matrix(a).det()


def test_gf2_rank():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([[1, 0, 1], [0, 1, 1], [1, 1, 0]]) == 2
    assert gf2_rank([]) == 0
