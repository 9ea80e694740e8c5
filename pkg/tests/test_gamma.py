import pytest
from hypothesis import given, settings, strategies as st

from dgcat.algebra import Quiver, path_algebra, quotient_module, regular_module, truncated_polynomial
from dgcat.gamma import (GammaAlgebra, Resolution, corner_modules, gamma_cohomology, stratifying_check, tor_oracle,
                         validate_resolution)
from dgcat.linalg import QQ, Subspace
from dgcat.report import ValidationError
from dgcat.workspace import parse_workspace
from dgcat.corpus import corpus_workspace


def test_a2_gamma(a2):
    g = GammaAlgebra(a2, a2.idempotents["e1"], 6)
    assert g.cohomology(0) == 1
    assert all(g.cohomology(p) == 0 for p in range(1, 7))
    rep = g.report()
    assert rep.ok, rep.summary()
    assert rep.data["cohomology"] == {0: 1, -1: 0, -2: 0, -3: 0, -4: 0, -5: 0, -6: 0}


def test_a2_verdict(a2):
    v = stratifying_check(a2, a2.idempotents["e1"], 6)
    assert v.stratifying and str(v) == "STRATIFYING (checked up to p=6)"
    assert v.to_dict()["verdict"] == "STRATIFYING"


def test_two_cycle_gamma(two_cycle):
    g = GammaAlgebra(two_cycle, two_cycle.idempotents["e1"], 4)
    assert [g.cohomology(p) for p in range(5)] == [1] * 5
    assert [g.dims(p) for p in range(1, 5)] == [g.product_formula(p) for p in range(1, 5)]
    assert g.report().ok


def test_two_cycle_verdict(two_cycle):
    v = stratifying_check(two_cycle, two_cycle.idempotents["e1"], 3)
    assert not v.stratifying and v.least_failing == 1
    assert str(v) == "NOT_STRATIFYING at p=1"


def test_two_cycle_tor_matches_gamma(two_cycle):
    ws = corpus_workspace("two_cycle")
    r = ws.resolutions["Pt"]
    dims, rep = tor_oracle(r["ring"], r["M"], r["N"], r["resolution"], 5)
    assert rep.ok
    assert dims == {0: 5, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1}
    g = GammaAlgebra(two_cycle, two_cycle.idempotents["e1"], 4)
    for p in range(2, 5):
        assert g.cohomology(p) == dims[p - 1]


def test_bad_resolution_names_degree():
    ws = corpus_workspace("two_cycle")
    r = ws.resolutions["Pe"]
    rep = validate_resolution(r["M"], r["resolution"], 3)
    assert not rep.ok
    assert "homological degree 1" in rep.first_failure.detail
    with pytest.raises(ValidationError):
        tor_oracle(r["ring"], r["M"], r["N"], r["resolution"], 3)


def test_non_idempotent_rejected(two_cycle):
    with pytest.raises(ValueError):
        GammaAlgebra(two_cycle, two_cycle.element("a"), 2)
    with pytest.raises(ValueError):
        GammaAlgebra(two_cycle, two_cycle.idempotents["e1"], -1)


def test_depth_bounds(a2):
    g = GammaAlgebra(a2, a2.idempotents["e1"], 2)
    with pytest.raises(ValueError):
        gamma_cohomology(g, 3)


def test_trivial_idempotents(a2):
    v = stratifying_check(a2, {}, 3)
    assert v.stratifying and v.quotient_dim == a2.dim
    g = GammaAlgebra(a2, a2.unit, 3)
    assert [g.cohomology(p) for p in range(4)] == [0] * 4
    assert stratifying_check(a2, a2.unit, 3).stratifying


def test_tor_over_a_field(a2):
    R, M, N = corner_modules(a2, a2.idempotents["e1"])
    assert R.dim == 1
    terms = {0: [R.unit] * M.dim, 1: [], 2: [], 3: []}
    res = Resolution(R, terms, {}, [{k: 1} for k in range(M.dim)])
    dims, _ = tor_oracle(R, M, N, res, 2)
    assert dims == {0: M.dim * N.dim, 1: 0, 2: 0}


def _simple(R, side):
    return quotient_module(regular_module(R, side), Subspace(R.F, 2, [{1: 1}]))


def test_tor_of_simples_over_dual_numbers():
    R = truncated_polynomial(QQ, 2)
    S, Sl = _simple(R, "right"), _simple(R, "left")
    t = {1: 1}
    p = 6
    res = Resolution(R, {k: [R.unit] for k in range(p + 2)}, {k: [[t]] for k in range(1, p + 2)}, [{0: 1}])
    dims, rep = tor_oracle(R, S, Sl, res, p)
    assert rep.ok and dims == {k: 1 for k in range(p + 1)}


def test_tor_of_free_module():
    R = truncated_polynomial(QQ, 2)
    M, N = regular_module(R, "right"), _simple(R, "left")
    res = Resolution(R, {0: [R.unit], 1: [], 2: []}, {}, [{0: 1}])
    dims, _ = tor_oracle(R, M, N, res, 1)
    assert dims == {0: 1, 1: 0}


def test_resolution_shape_errors():
    R = truncated_polynomial(QQ, 2)
    S, Sl = _simple(R, "right"), _simple(R, "left")
    with pytest.raises(ValidationError):
        tor_oracle(R, S, Sl, Resolution(R, {0: [R.unit]}, {}, [{0: 1}]), 2)  # missing terms
    with pytest.raises(ValidationError):
        tor_oracle(R, S, Sl, Resolution(R, {0: [R.unit], 1: [], 2: []}, {}, []), 1)  # no augmentation
    # d o d != 0
    one = {0: 1}
    bad = Resolution(R, {k: [R.unit] for k in range(4)}, {k: [[one]] for k in range(1, 4)}, [{0: 1}])
    assert not validate_resolution(S, bad, 2).ok


def test_gamma_cohomology_structured_record(two_cycle):
    from dgcat.commands import run
    ws = corpus_workspace("two_cycle")
    rep = run(ws, only="gamma")
    d = rep.to_dict()
    assert rep.exit_code == 0
    [res] = d["results"]
    assert {int(k): v for k, v in res["value"].items()} == {0: 1, -1: 1, -2: 1, -3: 1}


@settings(max_examples=8, deadline=None)
@given(n=st.integers(2, 4), p=st.integers(1, 3))
def test_product_formula_on_cycles(n, p):
    # the cyclic quiver with radical square zero
    vs = [str(i) for i in range(1, n + 1)]
    arrows = {"a%d" % i: (vs[i], vs[(i + 1) % n]) for i in range(n)}
    rels = [{"a%d*a%d" % ((i + 1) % n, i): 1} for i in range(n)]
    A = path_algebra(QQ, Quiver(vs, arrows), rels, 1)
    g = GammaAlgebra(A, A.idempotents["e1"], p)
    assert g.dims(p) == g.product_formula(p)
    assert g.cohomology(0) == A.dim - A.ideal(A.idempotents["e1"]).dim
