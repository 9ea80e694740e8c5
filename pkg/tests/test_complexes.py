import random

import pytest
from hypothesis import given, settings, strategies as st

from dgcat.complexes import (ChainMap, Complex, cohomology, cohomology_dims, cohomology_space, cone, desuspend, hom_complex,
                             identity_map, is_acyclic, is_contractible, is_null_homotopic, is_quasi_iso, stalk,
                             suspend, validate, zero_complex, zero_map)
from dgcat.linalg import GF, QQ, Matrix, kernel_basis
from dgcat.report import ValidationError

from conftest import complex_seeds, fields, random_complex


def two_term(F, lo=-1):
    return Complex(F, {lo: 1, lo + 1: 1}, {lo: Matrix.identity(F, 1)})


def test_validate_small_cases():
    assert validate(zero_complex(QQ)).ok
    assert validate(two_term(QQ)).ok


def test_fabricated_d_squared_violation_reports_degree():
    one = Matrix.identity(QQ, 1)
    bad = Complex(QQ, {0: 1, 1: 1, 2: 1}, {0: one, 1: one}, check=False)
    rep = validate(bad)
    assert not rep.ok
    assert "0" in rep.first_failure.detail or "0" in rep.first_failure.name
    with pytest.raises(ValidationError):
        Complex(QQ, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})


def test_cohomology_examples():
    assert cohomology_dims(two_term(QQ)) == {}
    n = 3
    c = stalk(QQ, -n + 1)
    assert cohomology(c, -n + 1)[0] == 1


def test_suspend():
    assert suspend(zero_complex(QQ)).is_zero()
    assert suspend(stalk(QQ, 0)).dims == {-1: 1}
    c = two_term(QQ, 0)
    s = suspend(c)
    assert s.dims == {-1: 1, 0: 1}
    assert s.differential(-1).dense() == [[-1]]


def test_cone_examples():
    X = two_term(QQ)
    f = zero_map(X, zero_complex(QQ))
    assert cone(f) == suspend(X)
    k = stalk(QQ, 0)
    c = cone(identity_map(k))
    assert c.dims == {-1: 1, 0: 1} and is_acyclic(c)


def test_cone_rejects_non_closed_and_wrong_degree():
    X = two_term(QQ)
    f = ChainMap(X, X, 0, {-1: Matrix.identity(QQ, 1)})  # not closed
    with pytest.raises(ValueError):
        cone(f)
    with pytest.raises(ValueError):
        cone(ChainMap(X, X, 1))


def test_hom_complex_examples():
    k = stalk(QQ, 0)
    h = hom_complex(k, k)
    assert h.dims == {0: 1} and h.differential(0).is_zero()
    h2 = hom_complex(two_term(QQ), k)
    # Hom(X, k) with X = (k -> k) in degrees -1, 0: degree 0 and 1 pieces, d bijective
    assert h2.dims == {0: 1, 1: 1}
    assert cohomology_dims(h2) == {}


def test_null_homotopic_examples():
    k = stalk(QQ, 0)
    assert is_null_homotopic(zero_map(k, k)) is not None
    assert is_null_homotopic(identity_map(k)) is None
    X = two_term(QQ)
    assert is_null_homotopic(identity_map(X)) is not None
    with pytest.raises(ValueError):
        is_null_homotopic(ChainMap(X, X, 0, {-1: Matrix.identity(QQ, 1)}))


def test_contractible_and_quasi_iso_examples():
    disc_hom = Complex(QQ, {-1: 1, 0: 1}, {-1: Matrix.identity(QQ, 1)})
    assert is_contractible(disc_hom)
    assert not is_contractible(stalk(QQ, 0))
    # k[0] -> (k -> k^2) with H^0 = k
    Y = Complex(QQ, {-1: 1, 0: 2}, {-1: Matrix.from_dense(QQ, [[1], [0]], 1)})
    inc = ChainMap(stalk(QQ, 0), Y, 0, {0: Matrix.from_dense(QQ, [[0], [1]], 1)})
    assert inc.is_closed() and is_quasi_iso(inc)


def test_homotopy_classes_match_h0_of_hom():
    """A closed degree-0 map is null-homotopic iff its class in H^0(Hom) vanishes."""
    F = GF(2)
    V, W = random_complex(F, 3, -1, 1, 2), random_complex(F, 4, -1, 1, 2)
    h = hom_complex(V, W)
    Q = cohomology_space(h, 0)
    Z = kernel_basis(h.differential(0))
    vecs = list(Z.basis) + [{k: F.norm(a.get(k, 0) + b.get(k, 0)) for k in set(a) | set(b)}
                            for a, b in zip(Z.basis, Z.basis[1:])]
    for z in vecs:
        z = {k: c for k, c in z.items() if c}
        assert (is_null_homotopic(h.to_map(0, z)) is not None) == Q.is_zero_class(z)


@settings(max_examples=40, deadline=None)
@given(F=fields, seed=complex_seeds)
def test_euler_characteristic(F, seed):
    c = random_complex(F, seed)
    assert c.euler_characteristic() == sum((-1) ** (i % 2) * n for i, n in cohomology_dims(c).items())
    assert cohomology_dims(c) == c.expected_h


@settings(max_examples=30, deadline=None)
@given(F=fields, seed=complex_seeds)
def test_suspend_round_trip(F, seed):
    c = random_complex(F, seed)
    assert desuspend(suspend(c)) == c
    assert cohomology_dims(suspend(c)) == {i - 1: n for i, n in cohomology_dims(c).items()}


@settings(max_examples=25, deadline=None)
@given(F=fields, s1=complex_seeds, s2=complex_seeds)
def test_hom_complex_valid_and_dimensions(F, s1, s2):
    V = random_complex(F, s1, -1, 1, 2)
    W = random_complex(F, s2, -1, 1, 2)
    h = hom_complex(V, W)
    assert validate(h).ok
    for p in range(-3, 4):
        assert h.dim(p) == sum(V.dim(n) * W.dim(n + p) for n in V.support)


@settings(max_examples=25, deadline=None)
@given(F=fields, s1=complex_seeds, s2=complex_seeds, pick=st.integers(0, 1000))
def test_cone_acyclic_iff_quasi_iso(F, s1, s2, pick):
    V = random_complex(F, s1, -1, 1, 2)
    W = random_complex(F, s2, -1, 1, 2)
    h = hom_complex(V, W)
    Z = kernel_basis(h.differential(0)) if h.dim(0) else None
    if Z is None or Z.dim == 0:
        f = zero_map(V, W)
    else:
        rng = random.Random(pick)
        vec = {}
        for b in Z.basis:
            c = F(rng.randint(0, 3))
            for k, a in b.items():
                vec[k] = F.norm(vec.get(k, 0) + c * a)
        f = h.to_map(0, {k: a for k, a in vec.items() if a})
    assert f.is_closed()
    C = cone(f)
    assert is_acyclic(C) == is_quasi_iso(f)
    # long exact sequence: dim H^i(C) = dim coker H^i(f) + dim ker H^{i+1}(f), checked by Euler
    assert C.euler_characteristic() == W.euler_characteristic() - V.euler_characteristic()


@settings(max_examples=30, deadline=None)
@given(F=fields, seed=complex_seeds)
def test_acyclic_iff_contractible(F, seed):
    c = random_complex(F, seed, -1, 1, 2)
    assert is_acyclic(c) == is_contractible(c)
