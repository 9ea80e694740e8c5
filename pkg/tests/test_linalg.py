from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgcat.linalg import GF, QQ, Field, Matrix, Subspace, image_basis, kernel_basis, quotient_data, row_reduce, solve

from conftest import fields


def dense(F, rows):
    return Matrix.from_dense(F, [[F(x) for x in r] for r in rows], len(rows[0]) if rows else 0)


def test_row_reduce_identity():
    m = Matrix.identity(QQ, 3)
    R, piv = row_reduce(m)
    assert R == m and piv == [0, 1, 2]


def test_row_reduce_zero():
    R, piv = row_reduce(Matrix.zero(QQ, 2, 4))
    assert R.is_zero() and piv == []


def test_row_reduce_hand_example():
    R, piv = row_reduce(dense(QQ, [[1, 2], [2, 4]]))
    assert R.dense() == [[1, 2], [0, 0]]
    assert piv == [0]


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(QQ, 3)).dim == 0
    assert kernel_basis(Matrix.zero(QQ, 4, 4)).dim == 4
    K = kernel_basis(dense(QQ, [[1, 2], [2, 4]]))
    assert K.dim == 1 and K.contains({0: -2, 1: 1})


def test_solve_identity_and_inconsistent():
    b = {0: Fraction(3), 2: Fraction(-1, 2)}
    assert solve(Matrix.identity(QQ, 3), b) == b
    assert solve(dense(QQ, [[1, 2], [2, 4]]), {0: 1}) is None


def test_quotient_data_rejects_non_subspace():
    amb = Subspace(QQ, 3, [{0: 1}])
    with pytest.raises(ValueError):
        quotient_data(amb, Subspace(QQ, 3, [{1: 1}]))
    n, reps = quotient_data(Subspace(QQ, 3, [{0: 1}, {1: 1}]), Subspace(QQ, 3, [{0: 1, 1: 1}]))
    assert n == 1 and len(reps) == 1


def test_field_parsing_and_coercion():
    assert Field.parse("GF(7)") == GF(7)
    assert Field.parse("Q") == QQ
    assert QQ("3/4") == Fraction(3, 4)
    assert GF(5)("1/2") == 3
    with pytest.raises(ValueError):
        GF(6)


def test_gf_inverse_exhaustive():
    F = GF(7)
    for a in range(1, 7):
        assert (a * F.inv(a)) % 7 == 1


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(F=fields, rows=matrices)
def test_rank_nullity(F, rows):
    m = dense(F, rows)
    assert kernel_basis(m).dim + m.rank() == m.cols
    for v in kernel_basis(m).basis:
        assert not m.apply(v)


@settings(max_examples=60, deadline=None)
@given(F=fields, rows=matrices, x=st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_solve_finds_a_solution_of_consistent_systems(F, rows, x):
    m = dense(F, rows)
    v = {j: F(a) for j, a in enumerate(x[:m.cols]) if F(a)}
    b = m.apply(v)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


@settings(max_examples=60, deadline=None)
@given(F=fields, rows=matrices)
def test_row_reduce_is_row_equivalent(F, rows):
    m = dense(F, rows)
    R, piv = row_reduce(m)
    assert len(piv) == m.rank()
    # same row space
    assert Subspace(F, m.cols, R.data) == Subspace(F, m.cols, m.data)
    assert image_basis(m).dim == len(piv)
