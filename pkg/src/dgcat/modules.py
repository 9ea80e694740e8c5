"""
Dg modules and bimodules over finite dg categories.

A left module stores ``value[x]`` (a Complex) and structure constants
``action[(x, y)][(a, m)] = a.m`` for basis morphisms a: x -> y and basis
elements m of value[x].  A right module stores ``action[(x, y)][(n, a)] = n.a``
for a: x -> y and n in value[y].  Right modules are handled internally as
left modules over the opposite category, with a.n = (-1)^{|n||a|} n.a.
"""

from __future__ import annotations

import itertools

from .category import DgCategory, TableBuilder, opposite
from .complexes import (ChainMap, Complex, HomComplex, QuotientComplex, Subcomplex, build_complex,
                        identity_map, zero_complex)
from .linalg import Field, Matrix, Subspace, axpy, kernel_basis, scale
from .report import Report, ValidationError


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def op_of(a: DgCategory) -> DgCategory:
    """Cached opposite, so that right modules over the same base share it."""
    op = getattr(a, "_op_cache", None)
    if op is None:
        op = opposite(a)
        op._op_cache = a
        a._op_cache = op
    return op


class DgModule:

    def __init__(self, base: DgCategory, side: str, value: dict, action: dict, name: str = "",
                 check: bool = True):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.base = base
        self.side = side
        self.F = base.F
        self._zero = zero_complex(base.F)
        self.value = {x: c for x, c in value.items() if not c.is_zero()}
        self.action = {k: {ij: v for ij, v in t.items() if v} for k, t in action.items()}
        self.name = name
        self._left = None
        if check:
            rep = validate_module(self)
            if not rep.ok:
                raise ValidationError(rep)

    def val(self, x) -> Complex:
        return self.value.get(x, self._zero)

    def act(self, x, y, a: dict, m: dict) -> dict:
        """Left: a.m for a: x->y, m in M(x).  Right: m.a for a: x->y, m in M(y)."""
        tbl = self.action.get((x, y))
        if not tbl or not a or not m:
            return {}
        F = self.F
        out: dict = {}
        if self.side == "left":
            for i, c in a.items():
                for j, e in m.items():
                    v = tbl.get((i, j))
                    if v:
                        axpy(F, out, F.norm(c * e), v)
        else:
            for i, c in a.items():
                for j, e in m.items():
                    v = tbl.get((j, i))
                    if v:
                        axpy(F, out, F.norm(c * e), v)
        return out

    def as_left(self) -> "DgModule":
        """The same module as a left module (over the opposite base if right)."""
        if self.side == "left":
            return self
        if self._left is None:
            op = op_of(self.base)
            action = {}
            for (x, y), tbl in self.action.items():
                hx = self.base.hom(x, y)
                vy = self.val(y)
                new = {}
                for (n, a), v in tbl.items():
                    s = _sign(vy.degrees[n] * hx.degrees[a])
                    new[(a, n)] = v if s == 1 else scale(self.F, -1, v)
                action[(y, x)] = new
            self._left = DgModule(op, "left", self.value, action, name=self.name, check=False)
        return self._left

    def __repr__(self):
        dims = {x: c.total_dim for x, c in self.value.items()}
        return "DgModule(%s %s, %s)" % (self.side, self.name, dims)


def validate_module(M: DgModule) -> Report:
    rep = Report("%s dg module %s" % (M.side, M.name))
    A, F = M.base, M.F
    L = M.as_left()
    B = L.base
    for x in A.objects:
        vx = M.val(x)
        e = B.identity.get(x, {})
        for k in range(vx.total_dim):
            if L.act(x, x, e, {k: 1}) != {k: 1}:
                rep.add("unit", False, "at %s" % x)
                return rep
    rep.add("unit", True)
    for x, y in B.pairs():
        h = B.hom(x, y)
        vx, vy = L.val(x), L.val(y)
        for i in range(h.total_dim):
            for j in range(vx.total_dim):
                am = L.act(x, y, {i: 1}, {j: 1})
                if am and any(vy.degrees[k] != h.degrees[i] + vx.degrees[j] for k in am):
                    rep.add("degree", False, "%s . m%d" % (B.basis_label(x, y, i), j))
                    return rep
                lhs = vy.dflat(am)
                rhs = L.act(x, y, B.d(x, y, {i: 1}), {j: 1})
                axpy(F, rhs, _sign(h.degrees[i]), L.act(x, y, {i: 1}, vx.dflat({j: 1})))
                if lhs != rhs:
                    rep.add("Leibniz", False, "%s . m%d" % (B.basis_label(x, y, i), j))
                    return rep
    rep.add("Leibniz", True)
    if M.side == "right":
        # d(n.a) = d(n).a + (-1)^{|n|} n.d(a)
        for x, y in A.pairs():
            h = A.hom(x, y)
            vy, vx = M.val(y), M.val(x)
            for i in range(h.total_dim):
                for j in range(vy.total_dim):
                    lhs = vx.dflat(M.act(x, y, {i: 1}, {j: 1}))
                    rhs = M.act(x, y, {i: 1}, vy.dflat({j: 1}))
                    axpy(F, rhs, _sign(vy.degrees[j]), M.act(x, y, A.d(x, y, {i: 1}), {j: 1}))
                    if lhs != rhs:
                        rep.add("right Leibniz", False, "m%d . %s" % (j, A.basis_label(x, y, i)))
                        return rep
        rep.add("right Leibniz", True)
    for x, y, z in itertools.product(B.objects, repeat=3):
        h1, h2, vx = B.hom(x, y), B.hom(y, z), L.val(x)
        if not (h1.total_dim and h2.total_dim and vx.total_dim):
            continue
        for i in range(h2.total_dim):
            for j in range(h1.total_dim):
                gf = B.compose(x, y, z, {i: 1}, {j: 1})
                for k in range(vx.total_dim):
                    if L.act(y, z, {i: 1}, L.act(x, y, {j: 1}, {k: 1})) != L.act(x, z, gf, {k: 1}):
                        rep.add("associativity", False, "(%s, %s, m%d)" % (
                            B.basis_label(y, z, i), B.basis_label(x, y, j), k))
                        return rep
    rep.add("associativity", True)
    return rep


# -- module maps --------------------------------------------------------------------

class ModuleMap:
    """A homogeneous map of modules: ``comps[x]`` is a ChainMap M(x) -> N(x)."""

    def __init__(self, source: DgModule, target: DgModule, degree: int, comps: dict | None = None):
        self.source, self.target, self.degree = source, target, degree
        self.comps = {}
        for x in source.base.objects:
            c = (comps or {}).get(x)
            if c is None:
                c = ChainMap(source.val(x), target.val(x), degree)
            self.comps[x] = c

    def apply(self, x, m: dict) -> dict:
        c = self.comps[x]
        vs, vt = self.source.val(x), self.target.val(x)
        out: dict = {}
        for n in {vs.degrees[j] for j in m}:
            axpy(self.source.F, out, 1, vt.embed(c.component(n).apply(vs.slice(m, n)), n + self.degree))
        return out

    def boundary(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.degree + 1,
                         {x: c.boundary() for x, c in self.comps.items()})

    def is_closed(self) -> bool:
        return all(c.is_closed() for c in self.comps.values())

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, self.degree + other.degree,
                         {x: self.comps[x] @ other.comps[x] for x in self.comps})

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.degree,
                         {x: self.comps[x] + other.comps[x] for x in self.comps})

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.degree,
                         {x: self.comps[x] - other.comps[x] for x in self.comps})

    def __eq__(self, other):
        return self.degree == other.degree and all(self.comps[x] == other.comps[x] for x in self.comps)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps.values())

    def is_natural(self) -> bool:
        """f(a.m) = (-1)^{|f||a|} a.f(m) on the left-module form."""
        Ms, Mt = self.source.as_left(), self.target.as_left()
        B = Ms.base
        for x, y in B.pairs():
            h = B.hom(x, y)
            for i in range(h.total_dim):
                s = _sign(self.degree * h.degrees[i])
                for j in range(Ms.val(x).total_dim):
                    lhs = self.apply(y, Ms.act(x, y, {i: 1}, {j: 1}))
                    rhs = scale(Ms.F, s, Mt.act(x, y, {i: 1}, self.apply(x, {j: 1})))
                    if lhs != rhs:
                        return False
        return True


def identity_module_map(M: DgModule) -> ModuleMap:
    return ModuleMap(M, M, 0, {x: identity_map(M.val(x)) for x in M.base.objects})


def _direct_sum(F: Field, parts):
    """Direct sum of complexes; returns (complex, offsets[part][degree])."""
    dims: dict = {}
    offsets = []
    for c in parts:
        off = {}
        for p in c.support:
            off[p] = dims.get(p, 0)
            dims[p] = dims.get(p, 0) + c.dim(p)
        offsets.append(off)
    d = {}
    for p in dims:
        if p + 1 not in dims:
            continue
        data = [{} for _ in range(dims[p + 1])]
        for c, off in zip(parts, offsets):
            if p in off and p + 1 in off:
                for r, row in enumerate(c.differential(p).data):
                    for j, a in row.items():
                        data[off[p + 1] + r][off[p] + j] = a
        d[p] = Matrix(F, dims[p + 1], dims[p], data)
    return Complex(F, dims, d), offsets


class ModuleHom:
    """Hom complex between two modules over the same base and side.

    Degree p consists of families (f_x) of degree-p maps with
    f(a.m) = (-1)^{p|a|} a.f(m), cut out of the product of Hom complexes.
    """

    def __init__(self, M: DgModule, N: DgModule):
        if M.base is not N.base or M.side != N.side:
            raise ValueError("modules must share base and side")
        F = M.F
        self.M, self.N = M, N
        Ml, Nl = M.as_left(), N.as_left()
        B = Ml.base
        self.objects = list(B.objects)
        self.homs = [HomComplex(Ml.val(x), Nl.val(x)) for x in self.objects]
        self.ambient, self.offsets = _direct_sum(F, self.homs)
        spaces = {}
        for p in self.ambient.support:
            spaces[p] = kernel_basis(self._constraints(Ml, Nl, B, p))
        self.sub = Subcomplex(self.ambient, spaces)
        self.complex = self.sub.complex

    def _constraints(self, Ml, Nl, B, p) -> Matrix:
        F = Ml.F
        eqs: dict = {}
        cols = []
        n = self.ambient.dim(p)
        for col in range(n):
            fam = self._family_of_ambient(p, {col: 1})
            out: dict = {}
            for (x, y) in B.pairs():
                h = B.hom(x, y)
                if not h.total_dim:
                    continue
                fx, fy = fam.get(x), fam.get(y)
                vx = Ml.val(x)
                if fx is None and fy is None:
                    continue
                for i in range(h.total_dim):
                    s = _sign(p * h.degrees[i])
                    for j in range(vx.total_dim):
                        val: dict = {}
                        if fy is not None:
                            axpy(F, val, 1, _apply(fy, Ml.val(y), Nl.val(y), Ml.act(x, y, {i: 1}, {j: 1})))
                        if fx is not None:
                            axpy(F, val, -s, Nl.act(x, y, {i: 1}, _apply(fx, vx, Nl.val(x), {j: 1})))
                        for r, a in val.items():
                            key = (x, y, i, j, r)
                            e = eqs.setdefault(key, len(eqs))
                            out[e] = a
            cols.append(out)
        return Matrix.from_columns(F, len(eqs), cols)

    def _family_of_ambient(self, p: int, vec: dict) -> dict:
        fam = {}
        for x, h, off in zip(self.objects, self.homs, self.offsets):
            if p not in off:
                continue
            o = off[p]
            part = {k - o: a for k, a in vec.items() if o <= k < o + h.dim(p)}
            if part:
                fam[x] = h.to_map(p, part)
        return fam

    def family(self, p: int, coords: dict) -> ModuleMap:
        """Coordinates in the degree-p basis -> ModuleMap."""
        vec = self.sub.to_ambient(p, coords)
        return ModuleMap(self.M, self.N, p, self._family_of_ambient(p, vec))

    def coords(self, f: ModuleMap) -> dict:
        p = f.degree
        vec: dict = {}
        for x, h, off in zip(self.objects, self.homs, self.offsets):
            if p in off:
                for k, a in h.from_map(f.comps[x]).items():
                    vec[off[p] + k] = a
        return self.sub.coords(p, vec)


def _apply(c: ChainMap, vs: Complex, vt: Complex, m: dict) -> dict:
    out: dict = {}
    for n in {vs.degrees[j] for j in m}:
        axpy(vs.F, out, 1, vt.embed(c.component(n).apply(vs.slice(m, n)), n + c.degree))
    return out


def module_hom_complex(M: DgModule, N: DgModule) -> Complex:
    return ModuleHom(M, N).complex


# -- builders -------------------------------------------------------------------

def free_module(A: DgCategory, y) -> DgModule:
    """The left module A(y, -) with action by composition."""
    value = {x: A.hom(y, x) for x in A.objects}
    action = {}
    for x, z in A.pairs():
        h, vx = A.hom(x, z), A.hom(y, x)
        tbl = {}
        for i in range(h.total_dim):
            for j in range(vx.total_dim):
                v = A.compose(y, x, z, {i: 1}, {j: 1})
                if v:
                    tbl[(i, j)] = v
        action[(x, z)] = tbl
    return DgModule(A, "left", value, action, name="%s(%s,-)" % (A.name or "A", y))


def representable(A: DgCategory, x) -> DgModule:
    """The right module A(-, x) with n.a = n o a."""
    value = {y: A.hom(y, x) for y in A.objects}
    action = {}
    for y, z in A.pairs():
        h, vz = A.hom(y, z), A.hom(z, x)
        tbl = {}
        for i in range(h.total_dim):
            for j in range(vz.total_dim):
                v = A.compose(y, z, x, {j: 1}, {i: 1})
                if v:
                    tbl[(j, i)] = v
        action[(y, z)] = tbl
    return DgModule(A, "right", value, action, name="%s(-,%s)" % (A.name or "A", x))


def zero_module(A: DgCategory, side: str = "left") -> DgModule:
    return DgModule(A, side, {}, {}, name="0")


def yoneda_check(A: DgCategory, y, M: DgModule) -> Report:
    """Hom_A(A(y,-), M) -> M(y), f |-> f_y(1_y): degreewise bijection commuting with d."""
    rep = Report("Yoneda at %s" % y)
    free = free_module(A, y) if M.side == "left" else representable(A, y)
    H = ModuleHom(free, M)
    C = H.complex
    target = M.val(y)
    unit = A.identity.get(y, {})
    for p in sorted(set(C.support) | set(target.support)):
        cols = []
        for k in range(C.dim(p)):
            f = H.family(p, {k: 1})
            cols.append(target.slice(f.apply(y, unit), p))
        mat = Matrix.from_columns(M.F, target.dim(p), cols)
        bij = mat.rows == mat.cols and mat.rank() == mat.cols
        rep.add("bijective in degree %d" % p, bij, "%d -> %d" % (C.dim(p), target.dim(p)))
        for k in range(C.dim(p)):
            f = H.family(p, {k: 1})
            lhs = f.boundary().apply(y, unit)
            rhs = target.dflat(f.apply(y, unit))
            if lhs != rhs:
                rep.add("commutes with d in degree %d" % p, False)
                break
    return rep


def suspend_module(M: DgModule, k: int = 1) -> DgModule:
    """Sigma^k M with a.Sigma(m) = (-1)^{|a|} Sigma(a.m) (applied k times)."""
    from .complexes import shift
    value = {x: shift(c, k) for x, c in M.value.items()}
    L = M.as_left()
    B = L.base
    action = {}
    for (x, y), tbl in L.action.items():
        h = B.hom(x, y)
        action[(x, y)] = {(i, j): (v if _sign(k * h.degrees[i]) == 1 else scale(M.F, -1, v))
                          for (i, j), v in tbl.items()}
    out = DgModule(B, "left", value, action, name="S^%d%s" % (k, M.name), check=True)
    if M.side == "left":
        return out
    return _left_to_right(out, M.base)


def _left_to_right(L: DgModule, base: DgCategory) -> DgModule:
    """Inverse of as_left for a module over op_of(base)."""
    action = {}
    for (y, x), tbl in L.action.items():
        h = base.hom(x, y)
        vy = L.val(y)
        new = {}
        for (a, n), v in tbl.items():
            s = _sign(vy.degrees[n] * h.degrees[a])
            new[(n, a)] = v if s == 1 else scale(L.F, -1, v)
        action[(x, y)] = new
    return DgModule(base, "right", L.value, action, name=L.name)


class ConeData:
    """Cone(f) with the structure maps j: N -> C, p: C -> Sigma M, t: C -> N, s: Sigma M -> C."""

    def __init__(self, module, j, p, t, s, sigma):
        self.module, self.j, self.p, self.t, self.s, self.sigma = module, j, p, t, s, sigma

    def biproduct_report(self) -> Report:
        rep = Report("cone biproduct")
        C, N, S = self.module, self.j.source, self.sigma
        rep.add("t o j = 1", self.t @ self.j == identity_module_map(N))
        rep.add("p o s = 1", self.p @ self.s == identity_module_map(S))
        rep.add("j o t + s o p = 1", (self.j @ self.t) + (self.s @ self.p) == identity_module_map(C))
        rep.add("p o j = 0", (self.p @ self.j).is_zero())
        rep.add("t o s = 0", (self.t @ self.s).is_zero())
        rep.add("j, p closed", self.j.is_closed() and self.p.is_closed())
        return rep


def cone_module(f: ModuleMap) -> ConeData:
    """Cone(f) = N + Sigma M objectwise, with the four maps of the biproduct diagram."""
    if f.degree != 0 or not f.is_closed():
        raise ValueError("cone needs a closed degree-0 module map")
    M, N = f.source, f.target
    F = M.F
    Ml, Nl = M.as_left(), N.as_left()
    B = Ml.base
    S = suspend_module(Ml)
    value, inN, inS = {}, {}, {}
    from .complexes import cone as cone_complex
    for x in B.objects:
        c = cone_complex(f.comps[x])
        value[x] = c
        vn, vs = Nl.val(x), S.val(x)
        mapN, mapS = {}, {}
        for n in c.support:
            tn = vn.dim(n)
            for k in range(tn):
                mapN[vn.flat(n, k)] = c.flat(n, k)
            for k in range(vs.dim(n)):
                mapS[vs.flat(n, k)] = c.flat(n, tn + k)
        inN[x], inS[x] = mapN, mapS
    action = {}
    for x, y in B.pairs():
        h = B.hom(x, y)
        if not h.total_dim:
            continue
        tbl = {}
        cx = value[x]
        backN = {v: k for k, v in inN[x].items()}
        backS = {v: k for k, v in inS[x].items()}
        for i in range(h.total_dim):
            for j in range(cx.total_dim):
                if j in backN:
                    v = Nl.act(x, y, {i: 1}, {backN[j]: 1})
                    img = {inN[y][k]: a for k, a in v.items()}
                else:
                    v = S.act(x, y, {i: 1}, {backS[j]: 1})
                    img = {inS[y][k]: a for k, a in v.items()}
                if img:
                    tbl[(i, j)] = img
        action[(x, y)] = tbl
    C = DgModule(B, "left", value, action, name="Cone")
    if M.side == "right":
        C = _left_to_right(C, M.base)
        S = _left_to_right(S, M.base)

    def inclusion(src, mapping, deg=0):
        comps = {}
        for x in B.objects:
            vs, vt = src.val(x), C.val(x)
            comps[x] = _chain_from_index_map(vs, vt, mapping[x])
        return ModuleMap(src, C, deg, comps)

    def projection(tgt, mapping):
        comps = {}
        for x in B.objects:
            vs, vt = C.val(x), tgt.val(x)
            comps[x] = _chain_from_index_map(vs, vt, {v: k for k, v in mapping[x].items()})
        return ModuleMap(C, tgt, 0, comps)

    j = inclusion(N, inN)
    s = inclusion(S, inS)
    t = projection(N, inN)
    p = projection(S, inS)
    return ConeData(C, j, p, t, s, S)


def _chain_from_index_map(vs: Complex, vt: Complex, mapping: dict) -> ChainMap:
    comps = {}
    for n in vs.support:
        cols = []
        for k in range(vs.dim(n)):
            tgt = mapping.get(vs.flat(n, k))
            cols.append(vt.slice({tgt: 1}, n) if tgt is not None else {})
        comps[n] = Matrix.from_columns(vs.F, vt.dim(n), cols)
    return ChainMap(vs, vt, 0, comps)


# -- bimodules ------------------------------------------------------------------

class Bimodule:
    """A dg A-B-bimodule: ``value[(y, u)] = X(y, u)`` for y in B, u in A.

    ``left[(u, u2, y)][(a, x)] = a.x`` for a: u -> u2, x in X(y, u);
    ``right[(y, y2, u)][(x, b)] = x.b`` for b: y -> y2, x in X(y2, u).
    """

    def __init__(self, A: DgCategory, B: DgCategory, value: dict, left: dict, right: dict,
                 name: str = "", check: bool = True):
        self.A, self.B, self.F = A, B, A.F
        self.value = {k: c for k, c in value.items() if not c.is_zero()}
        self.left, self.right = left, right
        self.name = name
        self._zero = zero_complex(A.F)
        if check:
            rep = validate_bimodule(self)
            if not rep.ok:
                raise ValidationError(rep)

    def val(self, y, u) -> Complex:
        return self.value.get((y, u), self._zero)

    def lact(self, u, u2, y, a: dict, x: dict) -> dict:
        tbl = self.left.get((u, u2, y), {})
        out: dict = {}
        for i, c in a.items():
            for j, e in x.items():
                v = tbl.get((i, j))
                if v:
                    axpy(self.F, out, self.F.norm(c * e), v)
        return out

    def ract(self, y, y2, u, x: dict, b: dict) -> dict:
        tbl = self.right.get((y, y2, u), {})
        out: dict = {}
        for j, e in x.items():
            for i, c in b.items():
                v = tbl.get((j, i))
                if v:
                    axpy(self.F, out, self.F.norm(c * e), v)
        return out

    def left_module(self, y) -> DgModule:
        """X(y, -) as a left A-module."""
        value = {u: self.val(y, u) for u in self.A.objects}
        action = {(u, u2): self.left.get((u, u2, y), {}) for u, u2 in self.A.pairs()}
        return DgModule(self.A, "left", value, action, name="%s(%s,-)" % (self.name, y), check=False)

    def right_module(self, u) -> DgModule:
        """X(-, u) as a right B-module."""
        value = {y: self.val(y, u) for y in self.B.objects}
        action = {(y, y2): self.right.get((y, y2, u), {}) for y, y2 in self.B.pairs()}
        return DgModule(self.B, "right", value, action, name="%s(-,%s)" % (self.name, u), check=False)


def validate_bimodule(X: Bimodule) -> Report:
    rep = Report("bimodule %s" % X.name)
    for y in X.B.objects:
        rep.extend(validate_module(X.left_module(y)), "left at %s: " % y)
    for u in X.A.objects:
        rep.extend(validate_module(X.right_module(u)), "right at %s: " % u)
    if not rep.ok:
        return rep
    ok = True
    for u, u2 in X.A.pairs():
        ha = X.A.hom(u, u2)
        for y, y2 in X.B.pairs():
            hb = X.B.hom(y, y2)
            vx = X.val(y2, u)
            for i in range(ha.total_dim):
                for j in range(hb.total_dim):
                    for k in range(vx.total_dim):
                        lhs = X.ract(y, y2, u2, X.lact(u, u2, y2, {i: 1}, {k: 1}), {j: 1})
                        rhs = X.lact(u, u2, y, {i: 1}, X.ract(y, y2, u, {k: 1}, {j: 1}))
                        if lhs != rhs:
                            ok = False
                            break
    rep.add("(a.x).b = a.(x.b)", ok)
    return rep


def regular_bimodule(A: DgCategory) -> Bimodule:
    """A as an A-A-bimodule: X(y, u) = A(y, u)."""
    value = {(y, u): A.hom(y, u) for y in A.objects for u in A.objects}
    left, right = {}, {}
    for y in A.objects:
        for u, u2 in A.pairs():
            h, vx = A.hom(u, u2), A.hom(y, u)
            left[(u, u2, y)] = {(i, j): A.compose(y, u, u2, {i: 1}, {j: 1})
                                for i in range(h.total_dim) for j in range(vx.total_dim)}
    for u in A.objects:
        for y, y2 in A.pairs():
            h, vx = A.hom(y, y2), A.hom(y2, u)
            right[(y, y2, u)] = {(j, i): A.compose(y, y2, u, {j: 1}, {i: 1})
                                 for i in range(h.total_dim) for j in range(vx.total_dim)}
    return Bimodule(A, A, value, left, right, name=A.name or "A")


class TensorModule:
    """X (x)_B N as a left A-module, built as a quotient of the direct sum."""

    def __init__(self, X: Bimodule, N: DgModule):
        if N.side != "left" or N.base is not X.B:
            raise ValueError("N must be a left module over the right base of X")
        F = X.F
        self.X, self.N = X, N
        self.quot = {}
        self.pos = {}
        value = {}
        for u in X.A.objects:
            keys, degs = [], []
            for y in X.B.objects:
                vx, vn = X.val(y, u), N.val(y)
                for i in range(vx.total_dim):
                    for j in range(vn.total_dim):
                        keys.append((y, i, j))
                        degs.append(vx.degrees[i] + vn.degrees[j])
            idx = {k: n for n, k in enumerate(keys)}

            def bd(n, keys=keys, idx=idx, u=u):
                y, i, j = keys[n]
                vx, vn = X.val(y, u), N.val(y)
                out = {}
                for i2, c in vx.dflat({i: 1}).items():
                    out[idx[(y, i2, j)]] = out.get(idx[(y, i2, j)], 0) + c
                s = _sign(vx.degrees[i])
                for j2, c in vn.dflat({j: 1}).items():
                    out[idx[(y, i, j2)]] = out.get(idx[(y, i, j2)], 0) + s * c
                return out
            amb, pos = build_complex(F, degs, bd)
            self.pos[u] = {k: pos[n] for n, k in enumerate(keys)}
            rels: dict = {}
            for y, y2 in X.B.pairs():
                hb = X.B.hom(y, y2)
                vx2, vn = X.val(y2, u), N.val(y)
                for b in range(hb.total_dim):
                    for i in range(vx2.total_dim):
                        for j in range(vn.total_dim):
                            v: dict = {}
                            for i2, c in X.ract(y, y2, u, {i: 1}, {b: 1}).items():
                                axpy(F, v, c, {self.pos[u][(y, i2, j)]: 1})
                            for j2, c in N.act(y, y2, {b: 1}, {j: 1}).items():
                                axpy(F, v, -c, {self.pos[u][(y2, i, j2)]: 1})
                            if v:
                                p = amb.degree_of(v)
                                rels.setdefault(p, []).append(amb.slice(v, p))
            spaces = {p: Subspace(F, amb.dim(p), vs) for p, vs in rels.items()}
            q = QuotientComplex(amb, spaces)
            self.quot[u] = q
            value[u] = q.complex
        action = {}
        for u, u2 in X.A.pairs():
            ha = X.A.hom(u, u2)
            q, q2 = self.quot[u], self.quot[u2]
            tbl = {}
            for p in q.complex.support:
                for k in range(q.complex.dim(p)):
                    flat_src = q.complex.flat(p, k)
                    amb_vec = q.ambient.embed(q.lift(p, {k: 1}), p)
                    for a in range(ha.total_dim):
                        img = self._act_ambient(u, u2, a, amb_vec)
                        if img:
                            pp = q2.ambient.degree_of(img)
                            cls = q2.project(pp, q2.ambient.slice(img, pp))
                            if cls:
                                tbl[(a, flat_src)] = q2.complex.embed(cls, pp)
            action[(u, u2)] = tbl
        self.module = DgModule(X.A, "left", value, action, name="%s(x)%s" % (X.name, N.name))

    def _act_ambient(self, u, u2, a, vec: dict) -> dict:
        F = self.X.F
        inv = {v: k for k, v in self.pos[u].items()}
        out: dict = {}
        for flat, c in vec.items():
            y, i, j = inv[flat]
            for i2, e in self.X.lact(u, u2, y, {a: 1}, {i: 1}).items():
                axpy(F, out, F.norm(c * e), {self.pos[u2][(y, i2, j)]: 1})
        return out

    def element(self, u, y, x: dict, n: dict) -> dict:
        """Class of x (x) n in (X (x) N)(u), as a flat vector of the quotient complex."""
        F = self.X.F
        q = self.quot[u]
        amb: dict = {}
        for i, a in x.items():
            for j, b in n.items():
                axpy(F, amb, F.norm(a * b), {self.pos[u][(y, i, j)]: 1})
        if not amb:
            return {}
        p = q.ambient.degree_of(amb)
        return q.complex.embed(q.project(p, q.ambient.slice(amb, p)), p)


def bimodule_tensor(X: Bimodule, N: DgModule) -> DgModule:
    return TensorModule(X, N).module


class HomModule:
    """Hom_A(X, M) as a left B-module, value y |-> Hom_A(X(y,-), M)."""

    def __init__(self, X: Bimodule, M: DgModule):
        if M.side != "left" or M.base is not X.A:
            raise ValueError("M must be a left module over the left base of X")
        F = X.F
        self.X, self.M = X, M
        self.homs = {y: ModuleHom(X.left_module(y), M) for y in X.B.objects}
        value = {y: h.complex for y, h in self.homs.items()}
        action = {}
        for y, y2 in X.B.pairs():
            hb = X.B.hom(y, y2)
            H, H2 = self.homs[y], self.homs[y2]
            tbl = {}
            for b in range(hb.total_dim):
                for p in H.complex.support:
                    for k in range(H.complex.dim(p)):
                        f = H.family(p, {k: 1})
                        g = self.act(y, y2, b, f)
                        c = H2.coords(g)
                        if c:
                            tbl[(b, H.complex.flat(p, k))] = H2.complex.embed(c, g.degree)
            action[(y, y2)] = tbl
        self.module = DgModule(X.B, "left", value, action, name="Hom(%s,%s)" % (X.name, M.name))

    def act(self, y, y2, b: int, f: ModuleMap) -> ModuleMap:
        """(b.f)(x) = (-1)^{|b|(|f|+|x|)} f(x.b) for x in X(y2, -)."""
        X, M = self.X, self.M
        F = X.F
        db = X.B.hom(y, y2).degrees[b]
        deg = f.degree + db
        src = X.left_module(y2)
        comps = {}
        for u in X.A.objects:
            vx, vm = X.val(y2, u), M.val(u)
            cols_by_deg: dict = {}
            for n in vx.support:
                cols = []
                for k in range(vx.dim(n)):
                    x = {vx.flat(n, k): 1}
                    xb = X.ract(y, y2, u, x, {b: 1})
                    img = _apply(f.comps[u], X.val(y, u), vm, xb) if xb else {}
                    s = _sign(db * (f.degree + n))
                    cols.append(vm.slice(scale(F, s, img), n + deg))
                cols_by_deg[n] = Matrix.from_columns(F, vm.dim(n + deg), cols)
            comps[u] = ChainMap(vx, vm, deg, cols_by_deg)
        return ModuleMap(src, self.homs[y2].N, deg, comps)


def bimodule_hom(X: Bimodule, M: DgModule) -> DgModule:
    return HomModule(X, M).module


def adjunction_check(X: Bimodule, N: DgModule, M: DgModule) -> Report:
    """Hom_A(X (x)_B N, M) -> Hom_B(N, Hom_A(X, M)), phi |-> (n |-> (x |-> (-1)^{|n||x|} phi(x (x) n)))."""
    rep = Report("tensor-Hom adjunction")
    F = X.F
    T = TensorModule(X, N)
    HM = HomModule(X, M)
    lhs = ModuleHom(T.module, M)
    rhs = ModuleHom(N, HM.module)
    L, R = lhs.complex, rhs.complex
    degrees = sorted(set(L.support) | set(R.support))
    images = {}
    for p in degrees:
        cols = []
        for k in range(L.dim(p)):
            phi = lhs.family(p, {k: 1})
            psi = _curry(T, HM, N, M, phi)
            c = rhs.coords(psi)
            cols.append(c)
            images[(p, k)] = c
        mat = Matrix.from_columns(F, R.dim(p), cols)
        bij = mat.rows == mat.cols and mat.rank() == mat.cols
        rep.add("bijective in degree %d" % p, bij, "%d -> %d" % (L.dim(p), R.dim(p)))
    ok = True
    for p in degrees:
        for k in range(L.dim(p)):
            dk = L.slice(L.dflat(L.embed({k: 1}, p)), p + 1)
            lhs_img: dict = {}
            for j, a in dk.items():
                axpy(F, lhs_img, a, images[(p + 1, j)])
            rhs_img = R.slice(R.dflat(R.embed(images[(p, k)], p)), p + 1) if images[(p, k)] else {}
            if lhs_img != rhs_img:
                ok = False
    rep.add("commutes with d", ok)
    return rep


def _curry(T: TensorModule, HM: HomModule, N: DgModule, M: DgModule, phi: ModuleMap) -> ModuleMap:
    X = T.X
    F = X.F
    comps = {}
    for y in X.B.objects:
        vn = N.val(y)
        H = HM.homs[y]
        target = HM.module.val(y)
        by_deg = {}
        for n in vn.support:
            cols = []
            for k in range(vn.dim(n)):
                nvec = {vn.flat(n, k): 1}
                fam = {}
                deg = phi.degree + n
                for u in X.A.objects:
                    vx, vm = X.val(y, u), M.val(u)
                    mats = {}
                    for q in vx.support:
                        cc = []
                        for i in range(vx.dim(q)):
                            xv = {vx.flat(q, i): 1}
                            t = T.element(u, y, xv, nvec)
                            img = phi.apply(u, t) if t else {}
                            cc.append(vm.slice(scale(F, _sign(n * q), img), q + deg))
                        mats[q] = Matrix.from_columns(F, vm.dim(q + deg), cc)
                    fam[u] = ChainMap(vx, vm, deg, mats)
                g = ModuleMap(X.left_module(y), M, deg, fam)
                c = H.coords(g)
                cols.append(target.slice(target.embed(c, deg), n + phi.degree) if c else {})
            by_deg[n] = Matrix.from_columns(F, target.dim(n + phi.degree), cols)
        comps[y] = ChainMap(vn, target, phi.degree, by_deg)
    return ModuleMap(N, HM.module, phi.degree, comps)


# -- complexes of projective modules ------------------------------------------------

class ProjectiveComplex:
    """A bounded complex of f.g. projective right modules  P^n = sum_k e_k A.

    ``terms[n]`` lists idempotents (as algebra vectors); ``d[n]`` is a matrix
    (rows: summands of P^{n+1}, cols: summands of P^n) of algebra elements,
    entry (l, k) in e_l A e_k acting by left multiplication.
    """

    def __init__(self, algebra, terms: dict, d: dict | None = None, name: str = ""):
        self.algebra = algebra
        self.terms = {n: list(t) for n, t in terms.items() if t}
        self.d = d or {}
        self.name = name

    def diff(self, n):
        m = self.d.get(n)
        if m is None:
            return [[{} for _ in self.terms.get(n, [])] for _ in self.terms.get(n + 1, [])]
        return m


def validate_projective_complex(P: ProjectiveComplex) -> Report:
    A = P.algebra
    rep = Report("projective complex %s" % P.name)
    for n, es in P.terms.items():
        for e in es:
            if not A.is_idempotent(e):
                rep.add("summands are e A with e idempotent", False, "degree %d" % n)
                return rep
    for n in P.terms:
        m = P.diff(n)
        src, tgt = P.terms[n], P.terms.get(n + 1, [])
        if len(m) != len(tgt) or any(len(r) != len(src) for r in m):
            rep.add("differential shape", False, "degree %d" % n)
            return rep
        for l, row in enumerate(m):
            for k, a in enumerate(row):
                if A.mul(A.mul(tgt[l], a), src[k]) != a:
                    rep.add("entries in e_l A e_k", False, "degree %d entry (%d,%d)" % (n, l, k))
                    return rep
    for n in P.terms:
        if n + 2 not in P.terms:
            continue
        m1, m2 = P.diff(n), P.diff(n + 1)
        for l in range(len(P.terms[n + 2])):
            for k in range(len(P.terms[n])):
                s: dict = {}
                for j in range(len(P.terms[n + 1])):
                    axpy(A.F, s, 1, A.mul(m2[l][j], m1[j][k]))
                if s:
                    rep.add("d^2=0", False, "degree %d" % n)
                    return rep
    rep.add("valid", True)
    return rep


def complexes_category(algebra, complexes: dict, name: str = "") -> DgCategory:
    """The dg category of the given complexes of projective right modules.

    Hom^p(P, Q) = prod_n Hom_A(P^n, Q^{n+p}) with d(f) = d_Q f - (-1)^p f d_P;
    Hom_A(e_k A, e_l A) is identified with e_l A e_k.
    """
    A = algebra
    F = A.F
    for nm, P in complexes.items():
        rep = validate_projective_complex(P)
        if not rep.ok:
            raise ValidationError(rep)
    corners: dict = {}

    def corner(l, k):
        key = (tuple(sorted(l.items())), tuple(sorted(k.items())))
        if key not in corners:
            corners[key] = A.corner(l, k)
        return corners[key]

    names = list(complexes)
    Bld = TableBuilder(F, names)
    for s in names:
        P = complexes[s]
        for t in names:
            Q = complexes[t]
            keys, degs = [], []
            for n, es in sorted(P.terms.items()):
                for m, fs in sorted(Q.terms.items()):
                    for k, e in enumerate(es):
                        for l, f in enumerate(fs):
                            S = corner(f, e)
                            for b in range(S.dim):
                                keys.append((n, m, l, k, b))
                                degs.append(m - n)

            def bd(key, P=P, Q=Q):
                n, m, l, k, b = key
                p = m - n
                elt = corner(Q.terms[m][l], P.terms[n][k]).basis[b]
                out: dict = {}
                # d_Q o f : P^n -> Q^{m+1}
                dq = Q.diff(m)
                for l2, row in enumerate(dq):
                    v = A.mul(row[l], elt)
                    if v:
                        _accumulate(out, (n, m + 1, l2, k), corner(Q.terms[m + 1][l2], P.terms[n][k]), v, 1)
                # -(-1)^p f o d_P : P^{n-1} -> Q^m
                dp = P.diff(n - 1)
                for k2 in range(len(P.terms.get(n - 1, []))):
                    v = A.mul(elt, dp[k][k2])
                    if v:
                        _accumulate(out, (n - 1, m, l, k2), corner(Q.terms[m][l], P.terms[n - 1][k2]), v,
                                    -_sign(p))
                return out
            Bld.set_hom(s, t, keys, degs, bd)

    def compose(x, y, z, kg, kf):
        n, m, l, k, b = kf
        n2, m2, l2, k2, b2 = kg
        if n2 != m or k2 != l:
            return {}
        P, Q, R = complexes[x], complexes[y], complexes[z]
        g = corner(R.terms[m2][l2], Q.terms[m][l]).basis[b2]
        f = corner(Q.terms[m][l], P.terms[n][k]).basis[b]
        out: dict = {}
        _accumulate(out, (n, m2, l2, k), corner(R.terms[m2][l2], P.terms[n][k]), A.mul(g, f), 1)
        return out

    def identity(x):
        P = complexes[x]
        out: dict = {}
        for n, es in P.terms.items():
            for k, e in enumerate(es):
                _accumulate(out, (n, n, k, k), corner(e, e), e, 1)
        return out

    cat = Bld.build(compose, identity, name=name or "C(%s)" % (A.name or "A"))
    cat.complexes = complexes
    cat.algebra = A
    return cat


def _accumulate(out: dict, prefix, S: Subspace, v: dict, sign: int):
    for b, c in enumerate(S.coordinates(v)):
        if c:
            key = prefix + (b,)
            out[key] = out.get(key, 0) + sign * c
