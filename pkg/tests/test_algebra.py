import pytest
from hypothesis import given, settings, strategies as st

from dgcat.algebra import (Quiver, corner_algebra, path_algebra, regular_module, truncated_polynomial,
                           validate_algebra)
from dgcat.linalg import GF, QQ


def test_a2_path_algebra(a2):
    assert a2.dim == 3 and validate_algebra(a2).ok
    e1, e2 = a2.idempotents["e1"], a2.idempotents["e2"]
    assert a2.mul(e1, e2) == {}
    assert a2.mul(a2.element("a"), a2.element("a")) == {}
    assert a2.ideal(e1).dim == 2  # A e1 A = span(e1, a)


def test_two_cycle_relations(two_cycle):
    A = two_cycle
    assert A.dim == 5 and validate_algebra(A).ok
    a, b = A.element("a"), A.element("b")
    assert A.mul(a, b) == {}  # a*b = 0
    assert A.mul(b, a) == A.element("b*a")
    e1 = A.idempotents["e1"]
    R, basis = corner_algebra(A, e1)
    assert R.dim == 2 and validate_algebra(R).ok
    t = {1: 1} if R.mul({1: 1}, {1: 1}) == {} else {0: 1}
    assert R.mul(t, t) == {}


def test_nilpotency_bound_enforced():
    Q = Quiver(["1"], {"t": ("1", "1")})
    with pytest.raises(ValueError, match="nilpotency"):
        path_algebra(QQ, Q, [], 2)
    A = path_algebra(QQ, Q, [{"t*t*t": 1}], 2)
    assert A.dim == 3


def test_linear_relations():
    # commutative square: two paths 1 -> 4 identified
    Q = Quiver(["1", "2", "3", "4"], {"a": ("1", "2"), "b": ("2", "4"), "c": ("1", "3"), "d": ("3", "4")})
    A = path_algebra(QQ, Q, [{"b*a": 1, "d*c": -1}], 2)
    assert A.dim == 4 + 4 + 1
    assert A.mul(A.element("b"), A.element("a")) == A.mul(A.element("d"), A.element("c"))


@settings(max_examples=10, deadline=None)
@given(n=st.integers(1, 5), F=st.sampled_from([QQ, GF(2), GF(3)]))
def test_truncated_polynomials(n, F):
    R = truncated_polynomial(F, n)
    assert R.dim == n and validate_algebra(R).ok
    M = regular_module(R, "right")
    assert M.dim == n
    t = {1: 1} if n > 1 else {}
    x = dict(R.unit)
    for _ in range(n):
        x = R.mul(x, t)
    assert x == {}
