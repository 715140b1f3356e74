from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix as SymMatrix

from ainfcat.coeff import (GF, QQ, ZZ, Matrix, RingSpec, kernel_basis, rank,
                           smith_normal_form, solve)


def determinantal_invariants(rows):
    """Invariant factors from gcds of k x k minors (independent of SNF code)."""
    if not rows or not rows[0]:
        return []
    nr, nc = len(rows), len(rows[0])
    divisors = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rs in combinations(range(nr), k):
            for cs in combinations(range(nc), k):
                g = gcd(g, int(SymMatrix([[rows[i][j] for j in cs] for i in rs]).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def det(m: Matrix):
    return int(SymMatrix(m.to_rows()).det()) if m.rows else 1


small_int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_ring_construction():
    assert GF(7).p == 7
    with pytest.raises(ValueError):
        GF(6)
    assert RingSpec.parse("fp:3") == GF(3)
    assert RingSpec.parse("Q") is QQ
    assert GF(5).coerce(Fraction(1, 2)) == 3


def test_matrix_canonical_sparse():
    m = Matrix(ZZ, 2, 2, {(0, 0): 0, (1, 1): 3})
    assert m.entries == {(1, 1): 3}
    with pytest.raises(IndexError):
        Matrix(ZZ, 1, 1, {(1, 0): 1})


@pytest.mark.parametrize("rows,diag", [
    ([[2]], [2]),
    ([[1, 0], [0, 1]], [1, 1]),
    ([[2, 4], [6, 8]], [2, 4]),
])
def test_snf_examples(rows, diag):
    m = Matrix.from_rows(ZZ, rows)
    d, u, v = smith_normal_form(m)
    assert d.diagonal() == diag
    assert u @ m @ v == d
    if rows == [[2]]:
        assert u == Matrix.identity(ZZ, 1) and v == Matrix.identity(ZZ, 1)


@settings(max_examples=150, deadline=None)
@given(small_int_matrices)
def test_snf_properties(rows):
    m = Matrix.from_rows(ZZ, rows)
    d, u, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    assert all(d[i, j] == 0 for (i, j) in d.entries if i != j)
    diag = [x for x in d.diagonal() if x]
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == determinantal_invariants(rows)


def test_rank_examples():
    assert rank(Matrix.zeros(QQ, 3, 3)) == 0
    assert rank(Matrix.identity(GF(2), 4)) == 4
    assert rank(Matrix.from_rows(QQ, [[1, 2], [2, 4]])) == 1
    with pytest.raises(ValueError):
        rank(Matrix.identity(ZZ, 2))


@settings(max_examples=100, deadline=None)
@given(small_int_matrices, st.sampled_from([QQ, GF(2), GF(3)]))
def test_rank_transpose(rows, ring):
    m = Matrix.from_rows(ring, rows)
    assert rank(m) == rank(m.T)
    if ring == QQ:
        assert rank(m) == SymMatrix(rows).rank()


def test_solve_examples():
    assert solve(Matrix.identity(ZZ, 3), [4, -1, 2]) == [4, -1, 2]
    assert solve(Matrix.from_rows(ZZ, [[2]]), [1]) is None
    assert solve(Matrix.from_rows(QQ, [[2]]), [1]) == [Fraction(1, 2)]
    with pytest.raises(ValueError):
        solve(Matrix.identity(QQ, 2), [1])


@settings(max_examples=150, deadline=None)
@given(small_int_matrices, st.sampled_from([ZZ, QQ, GF(2), GF(5)]), st.data())
def test_solve_remultiplies(rows, ring, data):
    m = Matrix.from_rows(ring, rows)
    x0 = data.draw(st.lists(st.integers(-3, 3), min_size=m.cols, max_size=m.cols))
    b = m.apply(x0)
    x = solve(m, b)
    assert x is not None
    assert m.apply(x) == b
    for k in kernel_basis(m):
        assert m.apply(k) == [ring.zero] * m.rows


def test_kernel_rank_nullity():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])
    assert len(kernel_basis(m)) == 3 - rank(m)
    mz = Matrix.from_rows(ZZ, [[2, 2, 2], [3, 3, 3]])
    assert len(kernel_basis(mz)) == 2
