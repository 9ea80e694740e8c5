"""Functor dg categories, the morphism dg category mor(A) and the H0 comparison."""

from __future__ import annotations

import random

from .category import (DgCategory, DgFunctor, TableBuilder, functor_from_images, tensor,
                       tensor_label, validate_functor)
from .complexes import Complex, Subcomplex
from .linalg import Matrix, axpy, kernel_basis, scale, solve
from .modules import _direct_sum, _sign
from .report import Report, ValidationError


class NatTransComplex:
    """Hom(F, G) for parallel dg functors: families (eta_x) cut out by naturality.

    A degree-p family satisfies G(a) o eta_x = (-1)^{p|a|} eta_{x'} o F(a).
    """

    def __init__(self, Fn: DgFunctor, Gn: DgFunctor):
        if Fn.source is not Gn.source or Fn.target is not Gn.target:
            raise ValueError("functors are not parallel")
        A, B = Fn.source, Fn.target
        self.F_, self.G_ = Fn, Gn
        self.A, self.B = A, B
        self.objects = list(A.objects)
        self.homs = [B.hom(Fn.obj(x), Gn.obj(x)) for x in self.objects]
        self.ambient, self.offsets = _direct_sum(A.F, self.homs)
        spaces = {p: kernel_basis(self._constraints(p)) for p in self.ambient.support}
        self.sub = Subcomplex(self.ambient, spaces)
        self.complex: Complex = self.sub.complex

    def _constraints(self, p: int) -> Matrix:
        A, B, Fn, Gn = self.A, self.B, self.F_, self.G_
        eqs: dict = {}
        cols = []
        for col in range(self.ambient.dim(p)):
            fam = self._family_of_ambient(p, {col: 1})
            out: dict = {}
            for x, x2 in A.pairs():
                h = A.hom(x, x2)
                ex, ex2 = fam.get(x), fam.get(x2)
                if not h.total_dim or (ex is None and ex2 is None):
                    continue
                fx, gx, fx2, gx2 = Fn.obj(x), Gn.obj(x), Fn.obj(x2), Gn.obj(x2)
                for i in range(h.total_dim):
                    val: dict = {}
                    if ex is not None:
                        axpy(A.F, val, 1, B.compose(fx, gx, gx2, Gn(x, x2, {i: 1}), ex))
                    if ex2 is not None:
                        axpy(A.F, val, -_sign(p * h.degrees[i]), B.compose(fx, fx2, gx2, ex2, Fn(x, x2, {i: 1})))
                    for r, a in val.items():
                        out[eqs.setdefault((x, x2, i, r), len(eqs))] = a
            cols.append(out)
        return Matrix.from_columns(A.F, len(eqs), cols)

    def _family_of_ambient(self, p: int, vec: dict) -> dict:
        fam = {}
        for x, h, off in zip(self.objects, self.homs, self.offsets):
            if p not in off:
                continue
            o = off[p]
            part = {k - o: a for k, a in vec.items() if o <= k < o + h.dim(p)}
            if part:
                fam[x] = h.embed(part, p)
        return fam

    def family(self, p: int, coords: dict) -> dict:
        """Degree-p coordinates -> {x: flat vector in B(Fx, Gx)}."""
        return self._family_of_ambient(p, self.sub.to_ambient(p, coords))

    def coords(self, p: int, family: dict) -> dict:
        vec: dict = {}
        for x, h, off in zip(self.objects, self.homs, self.offsets):
            v = family.get(x)
            if v:
                o = off[p]
                for k, a in h.slice(v, p).items():
                    vec[o + k] = a
        return self.sub.coords(p, vec)

    def is_natural(self, p: int, family: dict) -> bool:
        try:
            self.coords(p, family)
        except ValueError:
            return False
        return True


def nat_trans_complex(Fn: DgFunctor, Gn: DgFunctor) -> NatTransComplex:
    return NatTransComplex(Fn, Gn)


def functor_dg_category(A: DgCategory, B: DgCategory, functors: dict, check: bool = True,
                        name: str = "") -> DgCategory:
    """Objects = named functors A -> B; Hom = natural transformation complexes;
    composition is objectwise composition."""
    for nm, f in functors.items():
        rep = validate_functor(f)
        if not rep.ok:
            raise ValidationError(rep)
    names = list(functors)
    nts = {}
    Bld = TableBuilder(A.F, names)
    for s in names:
        for t in names:
            N = NatTransComplex(functors[s], functors[t])
            nts[(s, t)] = N
            C = N.complex
            keys = [(p, k) for p in C.support for k in range(C.dim(p))]

            def bd(key, C=C):
                p, k = key
                return {(p + 1, j): a for j, a in C.differential(p).apply({k: 1}).items()}
            Bld.set_hom(s, t, keys, [p for p, _ in keys], bd)

    def compose(x, y, z, kg, kf):
        (q, i), (p, j) = kg, kf
        g = nts[(y, z)].family(q, {i: 1})
        f = nts[(x, y)].family(p, {j: 1})
        comp = {}
        for o in A.objects:
            if o in g and o in f:
                Fx, Fy, Fz = functors[x].obj(o), functors[y].obj(o), functors[z].obj(o)
                v = B.compose(Fx, Fy, Fz, g[o], f[o])
                if v:
                    comp[o] = v
        return {(p + q, k): a for k, a in nts[(x, z)].coords(p + q, comp).items()}

    def identity(x):
        fam = {o: B.identity.get(functors[x].obj(o), {}) for o in A.objects}
        return {(0, k): a for k, a in nts[(x, x)].coords(0, fam).items()}

    cat = Bld.build(compose, identity, check=check, name=name or "Fun(%s,%s)" % (A.name, B.name))
    cat.functors = dict(functors)
    cat.nat = nts
    return cat


def _fun_flat(cat: DgCategory, s, t, p: int, coords: dict) -> dict:
    pos = cat.key_position.get((s, t), {})
    return {pos[(p, k)]: a for k, a in coords.items()}


def _fun_coords(cat: DgCategory, s, t, v: dict):
    """Flat vector of a functor-category Hom -> (degree, coordinates)."""
    h = cat.hom(s, t)
    p = h.degree_of(v)
    return p, h.slice(v, p) if p is not None else {}


def partial_functor(Phi: DgFunctor, A: DgCategory, B: DgCategory, x) -> DgFunctor:
    """Phi(x, -): B -> C for Phi: A (x) B -> C."""
    T = Phi.source
    one = A.identity[x]

    def images(y, y2, k):
        src, tgt = tensor_label(x, y), tensor_label(x, y2)
        pos = T.key_position[(src, tgt)]
        v = {pos[(i, k)]: c for i, c in one.items()}
        return Phi(src, tgt, v)
    return functor_from_images(B, Phi.target, {y: Phi.obj(tensor_label(x, y)) for y in B.objects},
                               images, name="%s(%s,-)" % (Phi.name, x))


def curry_check(A: DgCategory, B: DgCategory, functors: dict) -> Report:
    """Compare Fun(A(x)B, C) with Fun(A, Fun(B, C)) on the supplied functors.

    Each Phi is curried to x |-> Phi(x,-), a |-> (Phi(a (x) 1_y))_y; the map on Hom
    complexes sends (eta_{x*y}) to ((eta_{x*y})_y)_x.  Checks that the curried
    functors are dg functors, and that the map is a degreewise bijection
    commuting with d and composition.
    """
    rep = Report("currying")
    T = next(iter(functors.values())).source
    C = next(iter(functors.values())).target
    partial = {}
    for nm, Phi in functors.items():
        for x in A.objects:
            partial["%s|%s" % (nm, x)] = partial_functor(Phi, A, B, x)
    FunBC = functor_dg_category(B, C, partial, name="Fun(B,C)")
    curried = {}
    for nm, Phi in functors.items():
        def images(x, x2, k, nm=nm, Phi=Phi):
            src, tgt = "%s|%s" % (nm, x), "%s|%s" % (nm, x2)
            fam = {}
            for y in B.objects:
                pos = T.key_position[(tensor_label(x, y), tensor_label(x2, y))]
                v = {pos[(k, j)]: c for j, c in B.identity[y].items()}
                img = Phi(tensor_label(x, y), tensor_label(x2, y), v)
                if img:
                    fam[y] = img
            p = A.hom(x, x2).degrees[k]
            coords = FunBC.nat[(src, tgt)].coords(p, fam)
            return _fun_flat(FunBC, src, tgt, p, coords)
        try:
            curried[nm] = functor_from_images(A, FunBC, {x: "%s|%s" % (nm, x) for x in A.objects},
                                              images, name="~" + nm)
        except ValueError as exc:
            rep.add("curried %s natural" % nm, False, str(exc))
            return rep
        rep.extend(validate_functor(curried[nm]), "curried %s: " % nm)
    if not rep.ok:
        return rep
    left = functor_dg_category(T, C, functors, name="Fun(AxB,C)")
    right = functor_dg_category(A, FunBC, curried, name="Fun(A,Fun(B,C))")

    def transport(s, t, v):
        p, coords = _fun_coords(left, s, t, v)
        if p is None:
            return {}
        fam = left.nat[(s, t)].family(p, coords)
        outer = {}
        for x in A.objects:
            inner = {y: fam[tensor_label(x, y)] for y in B.objects if tensor_label(x, y) in fam}
            src, tgt = "%s|%s" % (s, x), "%s|%s" % (t, x)
            c = FunBC.nat[(src, tgt)].coords(p, inner)
            fv = _fun_flat(FunBC, src, tgt, p, c)
            if fv:
                outer[x] = fv
        c = right.nat[(s, t)].coords(p, outer)
        return _fun_flat(right, s, t, p, c)

    names = list(functors)
    for s in names:
        for t in names:
            L, R = left.hom(s, t), right.hom(s, t)
            rep.add("dims %s->%s" % (s, t), L.dims == R.dims, "%s vs %s" % (L.dims, R.dims))
            cols = [transport(s, t, {k: 1}) for k in range(L.total_dim)]
            M = Matrix.from_columns(A.F, R.total_dim, cols)
            rep.add("bijective %s->%s" % (s, t), M.rows == M.cols and M.rank() == M.cols)
            ok = all(transport(s, t, L.dflat({k: 1})) == R.dflat(cols[k]) for k in range(L.total_dim))
            rep.add("commutes with d %s->%s" % (s, t), ok)
    ok = True
    for s in names:
        for t in names:
            for u in names:
                for i in range(left.hom(t, u).total_dim):
                    for j in range(left.hom(s, t).total_dim):
                        lhs = transport(s, u, left.compose(s, t, u, {i: 1}, {j: 1}))
                        rhs = right.compose(s, t, u, transport(t, u, {i: 1}), transport(s, t, {j: 1}))
                        ok = ok and lhs == rhs
    rep.add("compatible with composition", ok)
    return rep


# -- mor(A) ---------------------------------------------------------------------

def mor_category(A: DgCategory, objects, check: bool = True, name: str = "") -> DgCategory:
    """mor(A) on chosen objects ``(label, x, y, a)`` with a: x -> y closed of degree 0.

    Hom^p = A(x,x')^p + A(y,y')^p + A(x,y')^{p-1}, an element [[alpha, 0], [h, beta]],
    with d = [[-d alpha, 0], [d h + a' alpha - (-1)^p beta a, d beta]] and matrix composition.
    """
    F = A.F
    objs = {}
    for label, x, y, a in objects:
        a = {k: F(c) for k, c in a.items() if F(c)}
        h = A.hom(x, y)
        if a and (h.degree_of(a) != 0 or A.d(x, y, a)):
            raise ValueError("object %s: the morphism must be closed of degree 0" % label)
        objs[label] = (x, y, a)
    Bld = TableBuilder(F, list(objs))
    for s, (x, y, a) in objs.items():
        for t, (x2, y2, a2) in objs.items():
            hx, hy, hh = A.hom(x, x2), A.hom(y, y2), A.hom(x, y2)
            keys = ([("al", i) for i in range(hx.total_dim)] + [("be", j) for j in range(hy.total_dim)]
                    + [("h", k) for k in range(hh.total_dim)])
            degs = ([hx.degrees[i] for i in range(hx.total_dim)] + [hy.degrees[j] for j in range(hy.total_dim)]
                    + [hh.degrees[k] + 1 for k in range(hh.total_dim)])

            def bd(key, x=x, y=y, a=a, x2=x2, y2=y2, a2=a2):
                kind, i = key
                out: dict = {}
                if kind == "al":
                    for j, c in A.d(x, x2, {i: 1}).items():
                        out[("al", j)] = -c
                    for j, c in A.compose(x, x2, y2, a2, {i: 1}).items():
                        out[("h", j)] = out.get(("h", j), 0) + c
                elif kind == "be":
                    p = A.hom(y, y2).degrees[i]
                    for j, c in A.d(y, y2, {i: 1}).items():
                        out[("be", j)] = c
                    for j, c in A.compose(x, y, y2, {i: 1}, a).items():
                        out[("h", j)] = out.get(("h", j), 0) - _sign(p) * c
                else:
                    for j, c in A.d(x, y2, {i: 1}).items():
                        out[("h", j)] = c
                return out
            Bld.set_hom(s, t, keys, degs, bd)

    def compose(s, t, u, kg, kf):
        (x, y, _), (x2, y2, _), (x3, y3, _) = objs[s], objs[t], objs[u]
        (g, i), (f, j) = kg, kf
        out: dict = {}

        def put(kind, v):
            for k, c in v.items():
                out[(kind, k)] = out.get((kind, k), 0) + c
        if g == "al" and f == "al":
            put("al", A.compose(x, x2, x3, {i: 1}, {j: 1}))
        elif g == "be" and f == "be":
            put("be", A.compose(y, y2, y3, {i: 1}, {j: 1}))
        elif g == "h" and f == "al":
            put("h", A.compose(x, x2, y3, {i: 1}, {j: 1}))
        elif g == "be" and f == "h":
            put("h", A.compose(x, y2, y3, {i: 1}, {j: 1}))
        return out

    def identity(s):
        x, y, _ = objs[s]
        out = {("al", k): c for k, c in A.identity.get(x, {}).items()}
        out.update({("be", k): c for k, c in A.identity.get(y, {}).items()})
        return out

    cat = Bld.build(compose, identity, check=check, name=name or "mor(%s)" % (A.name or "A"),
                    label=lambda k: "%s%d" % k)
    cat.base = A
    cat.mor_objects = objs
    return cat


def mor_element(M: DgCategory, s, t, alpha: dict, h: dict, beta: dict) -> dict:
    """Flat vector of [[alpha, 0], [h, beta]] in mor(A)(s, t)."""
    pos = M.key_position.get((s, t), {})
    out: dict = {}
    for kind, v in (("al", alpha), ("h", h), ("be", beta)):
        for k, c in v.items():
            if c:
                out[pos[(kind, k)]] = c
    return out


def mor_parts(M: DgCategory, s, t, v: dict):
    """Inverse of mor_element: (alpha, h, beta)."""
    inv = {p: k for k, p in M.key_position.get((s, t), {}).items()}
    parts = {"al": {}, "h": {}, "be": {}}
    for p, c in v.items():
        kind, k = inv[p]
        parts[kind][k] = c
    return parts["al"], parts["h"], parts["be"]


def _random_vec(rng: random.Random, h: Complex, p: int, F) -> dict:
    off, n = h.offset.get(p), h.dim(p)
    if off is None:
        return {}
    v = {off + k: F(rng.randint(-2, 2)) for k in range(n)}
    return {k: c for k, c in v.items() if c}


def _cycles(A: DgCategory, x, y, p: int):
    h = A.hom(x, y)
    if not h.dim(p):
        return []
    Z = kernel_basis(h.differential(p))
    return [h.embed(b, p) for b in Z.basis]


def h0_mor_comparison(M: DgCategory, samples: int = 20, seed: int = 0) -> Report:
    """Checks for H0(mor(A)) -> mor(H0(A)) on the chosen objects of ``M = mor_category(A, ...)``.

    Fullness: every pair (alpha, beta) of degree-0 cycles whose square commutes up to a
    boundary lifts to a closed (alpha, h, beta).  Density: every chosen object maps to
    (x, y; [a]).  Square-zero kernel: for kernel pairs (du, h, dv), (du', h', dv') the
    composite equals d of [[-du' u, 0], [v'h - h'u + v'a'u, v' dv]].
    """
    A = M.base
    F = A.F
    rep = Report("H0(mor A) -> mor(H0 A)")
    rng = random.Random(seed)
    objs = M.mor_objects
    for s, (x, y, a) in objs.items():
        ok = (not a or A.hom(x, y).degree_of(a) == 0) and not A.d(x, y, a)
        rep.add("dense at %s" % s, ok, "image (%s, %s; [a])" % (x, y))
    for s, (x, y, a) in objs.items():
        for t, (x2, y2, a2) in objs.items():
            za, zb = _cycles(A, x, x2, 0), _cycles(A, y, y2, 0)
            hh = A.hom(x, y2)
            # squares a2 alpha - beta a in B^0(x, y2)
            pairs = [(al, {}) for al in za] + [({}, be) for be in zb]
            gens = []
            for al, be in pairs:
                v = A.compose(x, x2, y2, a2, al)
                axpy(F, v, -1, A.compose(x, y, y2, be, a))
                gens.append(hh.slice(v, 0))
            bmat = hh.differential(-1) if hh.dim(-1) else Matrix.zero(F, hh.dim(0), 0)
            # (coeffs, bcoeffs) with sum c_k gens_k = d(w): kernel of [gens | -d]
            cols = gens + [scale(F, -1, c) for c in bmat.columns()]
            K = kernel_basis(Matrix.from_columns(F, hh.dim(0), cols))
            full = True
            for vec in K.basis:
                al, be = {}, {}
                for k, c in vec.items():
                    if k < len(pairs):
                        axpy(F, al, c, pairs[k][0])
                        axpy(F, be, c, pairs[k][1])
                diff = A.compose(x, x2, y2, a2, al)
                axpy(F, diff, -1, A.compose(x, y, y2, be, a))
                rhs = scale(F, -1, hh.slice(diff, 0))
                if not rhs:
                    hvec = {}
                else:
                    sol = solve(bmat, rhs) if bmat.cols else None
                    if sol is None:
                        full = False
                        break
                    hvec = hh.embed(sol, -1)
                m = mor_element(M, s, t, al, hvec, be)
                if M.d(s, t, m):
                    full = False
                    break
            rep.add("full %s->%s" % (s, t), full, "%d squares lifted" % K.dim)
    count = 0
    kernel_ok = True
    for s, (x, y, a) in objs.items():
        for t, (x2, y2, a2) in objs.items():
            for u, (x3, y3, a3) in objs.items():
                for _ in range(samples):
                    k1 = _kernel_morphism(A, rng, x, y, a, x2, y2, a2)
                    k2 = _kernel_morphism(A, rng, x2, y2, a2, x3, y3, a3)
                    if k1 is None or k2 is None:
                        break
                    (u1, v1, h1), (u2, v2, h2) = k1, k2
                    m1 = mor_element(M, s, t, A.d(x, x2, u1), h1, A.d(y, y2, v1))
                    m2 = mor_element(M, t, u, A.d(x2, x3, u2), h2, A.d(y2, y3, v2))
                    if M.d(s, t, m1) or M.d(t, u, m2):
                        rep.add("kernel witnesses closed", False)
                        return rep
                    comp = M.compose(s, t, u, m2, m1)
                    al = scale(F, -1, A.compose(x, x2, x3, A.d(x2, x3, u2), u1))
                    be = A.compose(y, y2, y3, v2, A.d(y, y2, v1))
                    ht = A.compose(x, y2, y3, v2, h1)
                    axpy(F, ht, -1, A.compose(x, x2, y3, h2, u1))
                    axpy(F, ht, 1, A.chain([x, x2, y2, y3], [u1, a2, v2]))
                    prim = mor_element(M, s, u, al, ht, be)
                    count += 1
                    if M.d(s, u, prim) != comp:
                        kernel_ok = False
                        rep.add("kernel composite = d(primitive)", False, "%s->%s->%s" % (s, t, u))
                        return rep
    rep.add("kernel composite = d(primitive)", kernel_ok, "%d pairs tested" % count)
    rep.data["kernel_pairs"] = count
    return rep


def _kernel_morphism(A: DgCategory, rng, x, y, a, x2, y2, a2):
    """Random closed (du, h, dv): (x,y;a) -> (x2,y2;a2); h = v a - a2 u + z with z a cycle."""
    F = A.F
    u = _random_vec(rng, A.hom(x, x2), -1, F)
    v = _random_vec(rng, A.hom(y, y2), -1, F)
    h = A.compose(x, y, y2, v, a)
    axpy(F, h, -1, A.compose(x, x2, y2, a2, u))
    for z in _cycles(A, x, y2, -1):
        c = F(rng.randint(-1, 1))
        if c:
            axpy(F, h, c, z)
    return u, v, h
