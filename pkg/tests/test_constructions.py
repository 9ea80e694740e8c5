import random

import pytest
from hypothesis import given, settings, strategies as st

from dgcat.algebra import Quiver, path_algebra, truncated_polynomial
from dgcat.category import (TableBuilder, dg_algebra, disc, functor_from_images, identity_functor, sphere, tensor,
                            unit_category, validate_category, validate_functor)
from dgcat.complexes import validate
from dgcat.constructions import (curry_check, functor_dg_category, h0_mor_comparison, mor_category, mor_element,
                                 mor_parts, nat_trans_complex)
from dgcat.linalg import GF, QQ, axpy


def as_dg_algebra(A, name=""):
    """An ordinary algebra as a one-object dg category in degree 0."""
    mult = {}
    for (i, j), v in A.table.items():
        mult[(A.basis[i], A.basis[j])] = {A.basis[k]: c for k, c in v.items()}
    unit = {A.basis[k]: c for k, c in A.unit.items()}
    return dg_algebra(A.F, A.basis, [0] * A.dim, mult, unit=unit, name=name or A.name)


def test_identity_nat_trans_on_commutative_algebra_is_the_algebra():
    A = as_dg_algebra(truncated_polynomial(QQ, 3))
    I = identity_functor(A)
    assert nat_trans_complex(I, I).complex.dims == {0: 3}


def test_identity_nat_trans_is_the_center():
    A2 = path_algebra(QQ, Quiver(["1", "2"], {"a": ("1", "2")}), [], 1)
    A = as_dg_algebra(A2)
    I = identity_functor(A)
    assert nat_trans_complex(I, I).complex.dims == {0: 1}


def test_graded_center_of_exterior_algebra():
    # k[x]/x^2, |x| = -1: x commutes with itself up to the Koszul sign since x^2 = 0
    E = dg_algebra(QQ, ["1", "x"], [0, -1], {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}})
    I = identity_functor(E)
    assert nat_trans_complex(I, I).complex.dims == {0: 1, -1: 1}


def test_two_algebra_maps_match_the_centralizer_description():
    R = as_dg_algebra(truncated_polynomial(QQ, 2))
    theta = identity_functor(R)
    theta0 = functor_from_images(R, R, {"*": "*"}, lambda x, y, k: {0: 1} if k == 0 else {})
    assert validate_functor(theta0).ok
    C = functor_dg_category(R, R, {"id": theta, "aug": theta0})
    assert validate_category(C).ok
    # Hom(theta, theta')^0 = {b : theta'(a) b = b theta(a)}
    assert C.dim("id", "id") == 2 and C.dim("aug", "aug") == 2
    assert C.dim("id", "aug") == 1 and C.dim("aug", "id") == 1


def test_discrete_source_gives_product_space():
    B = TableBuilder(QQ, ["p", "q"])
    B.set_hom("p", "p", ["1p"], [0])
    B.set_hom("q", "q", ["1q"], [0])
    Disc = B.build(lambda x, y, z, g, f: {g if f.startswith("1") else f: 1}, lambda x: {"1" + x: 1})
    D = disc(1)
    F = functor_from_images(Disc, D, {"p": "x", "q": "x"}, lambda x, y, k: {0: 1})
    G = functor_from_images(Disc, D, {"p": "y", "q": "y"}, lambda x, y, k: {0: 1})
    N = nat_trans_complex(F, G)
    assert N.complex.dims == {-1: 2, 0: 2}


def test_single_identity_functor_category():
    D = disc(1)
    C = functor_dg_category(D, D, {"id": identity_functor(D)})
    assert C.objects == ("id",) and validate_category(C).ok


def test_nat_trans_complex_valid_and_natural():
    D = disc(1)
    I = identity_functor(D)
    N = nat_trans_complex(I, I)
    assert validate(N.complex).ok
    for p in N.complex.support:
        for k in range(N.complex.dim(p)):
            assert N.is_natural(p, N.family(p, {k: 1}))


@pytest.mark.parametrize("A,B", [
    (lambda: disc(1), lambda: unit_category(QQ)),
    (lambda: sphere(0), lambda: sphere(1)),
    (lambda: dg_algebra(QQ, ["1", "x"], [0, -1], {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}}),
     lambda: disc(0)),
])
def test_currying(A, B):
    A, B = A(), B()
    T = tensor(A, B)
    rep = curry_check(A, B, {"id": identity_functor(T)})
    assert rep.ok, rep.summary()


def test_mor_of_unit_with_identity():
    k = unit_category(QQ)
    M = mor_category(k, [("i", "*", "*", k.identity["*"])])
    assert validate_category(M).ok
    assert M.hom("i", "i").dims == {0: 2, 1: 1}


def test_mor_rejects_non_closed():
    D = disc(1)
    with pytest.raises(ValueError):
        mor_category(D, [("f", "x", "y", {0: 1})])  # delta is not closed


def test_zero_object_differential_has_no_a_terms():
    D = disc(1)
    M = mor_category(D, [("z", "x", "y", {})])
    for k in range(M.dim("z", "z")):
        al, h, be = mor_parts(M, "z", "z", M.d("z", "z", {k: 1}))
        al0, h0_, be0 = mor_parts(M, "z", "z", {k: 1})
        assert h == {j: c for j, c in D.d("x", "y", h0_).items()} or not h0_ and not h


def test_mor_composition_is_matrix_multiplication():
    D = disc(1)
    eps = {1: 1}
    objs = [("f", "x", "y", eps), ("ix", "x", "x", D.identity["x"]), ("z", "x", "y", {})]
    M = mor_category(D, objs)
    rng = random.Random(1)
    labels = [o[0] for o in objs]
    for _ in range(30):
        s, t, u = (rng.choice(labels) for _ in range(3))
        f = {k: QQ(rng.randint(-2, 2)) for k in range(M.dim(s, t))}
        g = {k: QQ(rng.randint(-2, 2)) for k in range(M.dim(t, u))}
        f = {k: c for k, c in f.items() if c}
        g = {k: c for k, c in g.items() if c}
        a1, h1, b1 = mor_parts(M, s, t, f)
        a2, h2, b2 = mor_parts(M, t, u, g)
        (x, y, _), (x2, y2, _), (x3, y3, _) = (M.mor_objects[o] for o in (s, t, u))
        al = D.compose(x, x2, x3, a2, a1)
        be = D.compose(y, y2, y3, b2, b1)
        h = D.compose(x, x2, y3, h2, a1)
        axpy(QQ, h, 1, D.compose(x, y2, y3, b2, h1))
        assert M.compose(s, t, u, g, f) == mor_element(M, s, u, al, h, be)


@pytest.mark.parametrize("build", [
    lambda: mor_category(disc(1), [("f", "x", "y", {1: 1}), ("ix", "x", "x", {0: 1}), ("iy", "y", "y", {0: 1})]),
    lambda: mor_category(sphere(0), [("g", "x", "y", {0: 1}), ("z", "x", "y", {})]),
    lambda: mor_category(disc(0), [("z", "x", "y", {}), ("ix", "x", "x", {0: 1}), ("iy", "y", "y", {0: 1})]),
])
def test_h0_mor_comparison(build):
    M = build()
    assert validate_category(M).ok
    rep = h0_mor_comparison(M, samples=20, seed=3)
    assert rep.ok, rep.summary()


@settings(max_examples=15, deadline=None)
@given(n=st.integers(-2, 2), F=st.sampled_from([QQ, GF(2), GF(3)]), c=st.integers(0, 4))
def test_mor_categories_always_validate(n, F, c):
    D = disc(n, F)
    S = sphere(n, F)
    # eps is closed; in sphere(n) it has degree -n, so it is a legal object only for n = 0
    objs = [("ix", "x", "x", {0: 1}), ("z", "x", "y", {})]
    if n == 0 and F(c):
        objs.append(("e", "x", "y", {0: F(c)}))
    M = mor_category(S, objs)
    assert validate_category(M).ok
    Md = mor_category(D, [("ix", "x", "x", {0: 1}), ("iy", "y", "y", {0: 1})])
    assert validate_category(Md).ok
