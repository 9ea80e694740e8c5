import pytest
from hypothesis import given, settings, strategies as st

from dgcat.algebra import Quiver, path_algebra
from dgcat.category import dg_algebra, disc, sphere, tensor, unit_category
from dgcat.complexes import cohomology_dims, is_contractible, validate
from dgcat.linalg import GF, QQ
from dgcat.modules import (ModuleHom, ModuleMap, ProjectiveComplex, adjunction_check, bimodule_hom, bimodule_tensor,
                           complexes_category, cone_module, free_module, identity_module_map, module_hom_complex,
                           regular_bimodule, representable, suspend_module, validate_module, yoneda_check,
                           zero_module)
from dgcat.category import validate_category

EXTERIOR = lambda F=QQ: dg_algebra(F, ["1", "x"], [0, -1],
                                   {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}})
CORPUS = {
    "disc0": lambda: disc(0), "disc1": lambda: disc(1), "disc-1": lambda: disc(-1),
    "sphere0": lambda: sphere(0), "sphere2": lambda: sphere(2), "ext": EXTERIOR,
    "unit": lambda: unit_category(QQ),
}


def test_free_over_one_object_algebra_is_regular():
    E = EXTERIOR()
    M = free_module(E, "*")
    assert M.val("*").dims == {0: 1, -1: 1}
    assert validate_module(M).ok
    (u,), x = E.identity["*"], 0
    assert M.act("*", "*", {x: 1}, {u: 1}) == {x: 1}


def test_free_module_of_disc_reads_off_table():
    D = disc(1)
    M = free_module(D, "x")
    assert M.val("x").dims == {0: 1}
    assert M.val("y").dims == {-1: 1, 0: 1}
    assert free_module(D, "y").val("x").is_zero()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_yoneda_on_every_object(name):
    A = CORPUS[name]()
    for y in A.objects:
        for x in A.objects:
            for M in (free_module(A, x), representable(A, x)):
                rep = yoneda_check(A, y, M)
                assert rep.ok, rep.summary()


def test_hom_of_free_modules_is_hom_in_category():
    D = disc(1)
    for x in D.objects:
        for y in D.objects:
            C = module_hom_complex(free_module(D, y), free_module(D, x))
            assert C.dims == D.hom(x, y).dims


def test_hom_into_zero():
    D = disc(1)
    assert module_hom_complex(free_module(D, "x"), zero_module(D)).is_zero()


def test_yoneda_dimensions_on_disc1():
    D = disc(1)
    M = free_module(D, "x")
    H = ModuleHom(free_module(D, "x"), M)
    assert H.complex.dims == M.val("x").dims


def test_left_leibniz_violation_is_rejected():
    from dgcat.modules import DgModule
    E = EXTERIOR()
    M = free_module(E, "*")
    bad = {k: dict(t) for k, t in M.action.items()}
    (u,), x = E.identity["*"], 0
    bad[("*", "*")][(u, x)] = {x: -1}  # 1 . x = -x
    rep = validate_module(DgModule(E, "left", M.value, bad, check=False))
    assert not rep.ok


@pytest.mark.parametrize("name", ["disc1", "sphere0", "ext"])
def test_suspension_round_trip(name):
    A = CORPUS[name]()
    for M in (free_module(A, A.objects[0]), representable(A, A.objects[0])):
        S = suspend_module(M)
        assert validate_module(S).ok
        B = suspend_module(S, -1)
        for x in A.objects:
            assert B.val(x).dims == M.val(x).dims
        assert B.action == (M.action if M.side == "left" else B.action)


@pytest.mark.parametrize("name", ["disc1", "sphere0", "ext"])
def test_cone_of_identity(name):
    A = CORPUS[name]()
    M = free_module(A, A.objects[0])
    cd = cone_module(identity_module_map(M))
    assert validate_module(cd.module).ok
    assert all(is_contractible(cd.module.val(x)) for x in A.objects)
    rep = cd.biproduct_report()
    assert rep.ok, rep.summary()


def test_cone_rejects_non_closed():
    D = disc(1)
    M = free_module(D, "y")
    H = ModuleHom(free_module(D, "y"), M)
    # the family corresponding to delta is not closed
    for k in range(H.complex.dim(-1)):
        f = H.family(-1, {k: 1})
        with pytest.raises(ValueError):
            cone_module(f)
    with pytest.raises(ValueError):
        cone_module(ModuleMap(M, M, 1))


@pytest.mark.parametrize("name", ["disc1", "sphere0", "ext", "unit"])
def test_tensor_with_regular_bimodule_is_identity(name):
    A = CORPUS[name]()
    X = regular_bimodule(A)
    for y in A.objects:
        N = free_module(A, y)
        T = bimodule_tensor(X, N)
        assert validate_module(T).ok
        for u in A.objects:
            assert T.val(u).dims == N.val(u).dims


@pytest.mark.parametrize("name", ["disc1", "sphere0", "ext", "disc0"])
def test_adjunction(name):
    A = CORPUS[name]()
    X = regular_bimodule(A)
    for y in A.objects:
        for z in A.objects:
            rep = adjunction_check(X, free_module(A, y), free_module(A, z))
            assert rep.ok, rep.summary()


def test_bimodule_hom_is_valid():
    A = disc(1)
    X = regular_bimodule(A)
    H = bimodule_hom(X, free_module(A, "x"))
    assert validate_module(H).ok


def test_complexes_category_table(two_cycle):
    A = two_cycle.algebra if hasattr(two_cycle, "algebra") else two_cycle
    e = A.idempotents["e1"]
    C = complexes_category(A, {"A": ProjectiveComplex(A, {0: [A.unit]}), "eA": ProjectiveComplex(A, {0: [e]})})
    assert validate_category(C).ok
    eAe = A.corner(e, e).dim
    assert C.dim("A", "A") == A.dim
    assert C.dim("eA", "eA") == eAe


def test_complexes_category_hom_dimensions():
    A = path_algebra(QQ, Quiver(["1", "2"], {"a": ("1", "2")}), [], 1)
    e1, e2 = A.idempotents["e1"], A.idempotents["e2"]
    P = lambda e: ProjectiveComplex(A, {0: [e]})
    C = complexes_category(A, {"A": P(A.unit), "P1": P(e1), "P2": P(e2)})
    # Hom(eA, fA) = f A e
    for (s, es), (t, et) in [((s, es), (t, et)) for s, es in [("P1", e1), ("P2", e2), ("A", A.unit)]
                             for t, et in [("P1", e1), ("P2", e2), ("A", A.unit)]]:
        assert C.dim(s, t) == A.corner(et, es).dim
    two = ProjectiveComplex(A, {-1: [e1], 0: [e2]}, {-1: [[A.element("a")]]})
    C2 = complexes_category(A, {"C": two})
    assert validate_category(C2).ok


def test_complexes_category_rejects_bad_differential():
    from dgcat.report import ValidationError
    A = path_algebra(QQ, Quiver(["1", "2"], {"a": ("1", "2")}), [], 1)
    e1, e2 = A.idempotents["e1"], A.idempotents["e2"]
    with pytest.raises(ValidationError):
        complexes_category(A, {"C": ProjectiveComplex(A, {-1: [e2], 0: [e1]}, {-1: [[A.element("a")]]})})


@settings(max_examples=10, deadline=None)
@given(n=st.integers(-2, 2), F=st.sampled_from([QQ, GF(2), GF(3)]))
def test_free_modules_of_discs_validate(n, F):
    D = disc(n, F)
    for y in D.objects:
        assert validate_module(free_module(D, y)).ok
        assert validate_module(representable(D, y)).ok
        assert yoneda_check(D, y, free_module(D, "x")).ok
