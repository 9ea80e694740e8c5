"""
Finite dg categories given by tables.

A ``DgCategory`` stores, for every ordered pair of objects, a Hom complex
with an explicit basis (the flat basis of ``Complex``), composition
structure constants on basis pairs and identity vectors.  Morphisms are
sparse dicts over the flat basis of the relevant Hom complex.
"""

from __future__ import annotations

import itertools

from .complexes import (ChainMap, Complex, build_complex, cohomology_space, is_quasi_iso,
                        zero_complex)
from .linalg import Field, Matrix, Subspace, axpy, kernel_basis, scale, solve
from .report import Report, ValidationError


class DgCategory:

    def __init__(self, F: Field, objects, hom: dict, comp: dict, identity: dict,
                 labels: dict | None = None, check: bool = True, name: str = ""):
        self.F = F
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object labels")
        self._zero = zero_complex(F)
        self._hom = {k: h for k, h in hom.items() if not h.is_zero()}
        # comp[(x, y, z)][(i, j)] = g_i o f_j for g_i in Hom(y,z), f_j in Hom(x,y)
        self.comp = {k: {ij: v for ij, v in tbl.items() if v} for k, tbl in comp.items()}
        self.identity = dict(identity)
        self.labels = dict(labels or {})
        self.name = name
        for (x, y) in self._hom:
            if x not in self.objects or y not in self.objects:
                raise ValueError("Hom(%s,%s) refers to unknown objects" % (x, y))
        if check:
            rep = validate_category(self)
            if not rep.ok:
                raise ValidationError(rep)

    def hom(self, x, y) -> Complex:
        return self._hom.get((x, y), self._zero)

    def dim(self, x, y) -> int:
        return self.hom(x, y).total_dim

    def pairs(self):
        return [(x, y) for x in self.objects for y in self.objects]

    def degree(self, x, y, v: dict):
        return self.hom(x, y).degree_of(v)

    def d(self, x, y, v: dict) -> dict:
        return self.hom(x, y).dflat(v)

    def compose(self, x, y, z, g: dict, f: dict) -> dict:
        """g o f for f: x -> y, g: y -> z."""
        if not g or not f:
            return {}
        tbl = self.comp.get((x, y, z))
        if not tbl:
            return {}
        F = self.F
        out: dict = {}
        for i, a in g.items():
            for j, b in f.items():
                v = tbl.get((i, j))
                if v:
                    axpy(F, out, F.norm(a * b), v)
        return out

    def chain(self, path, morphisms):
        """Compose ``morphisms`` (listed first-to-last) along objects ``path``."""
        acc = morphisms[0]
        for k in range(1, len(morphisms)):
            acc = self.compose(path[0], path[k], path[k + 1], morphisms[k], acc)
        return acc

    def basis_label(self, x, y, k: int) -> str:
        lab = self.labels.get((x, y))
        return lab[k] if lab else "%s->%s#%d" % (x, y, k)

    def __repr__(self):
        return "DgCategory(%s%s, objects=%s)" % (self.name + " " if self.name else "", self.F, list(self.objects))


class TableBuilder:
    """Assemble a DgCategory from keyed bases.

    Each Hom is given as a list of keys with degrees and a differential on
    keys; composition is a function ``(x, y, z, key_g, key_f) -> {key: coeff}``.
    """

    def __init__(self, F: Field, objects):
        self.F = F
        self.objects = list(objects)
        self.keys: dict = {}
        self.degrees: dict = {}
        self.bound: dict = {}

    def set_hom(self, x, y, keys, degrees, boundary=None):
        self.keys[(x, y)] = list(keys)
        self.degrees[(x, y)] = list(degrees)
        self.bound[(x, y)] = boundary or (lambda k: {})

    def build(self, compose, identity, check=True, name="", label=str) -> DgCategory:
        F = self.F
        hom, pos, index = {}, {}, {}
        for xy, keys in self.keys.items():
            if not keys:
                continue
            idx = {k: n for n, k in enumerate(keys)}
            index[xy] = idx
            bd = self.bound[xy]
            c, ps = build_complex(F, self.degrees[xy],
                                  lambda n, bd=bd, keys=keys, idx=idx: {idx[k]: a for k, a in bd(keys[n]).items()},
                                  check=False)
            hom[xy] = c
            pos[xy] = ps

        def flat(xy, vec):
            return {pos[xy][index[xy][k]]: F.norm(a) for k, a in vec.items() if F.norm(a)}

        comp = {}
        for x in self.objects:
            for y in self.objects:
                if (x, y) not in hom:
                    continue
                for z in self.objects:
                    if (y, z) not in hom or (x, z) not in hom:
                        continue
                    tbl = {}
                    for kg in self.keys[(y, z)]:
                        for kf in self.keys[(x, y)]:
                            v = compose(x, y, z, kg, kf)
                            if v:
                                v = flat((x, z), v)
                                if v:
                                    tbl[(pos[(y, z)][index[(y, z)][kg]], pos[(x, y)][index[(x, y)][kf]])] = v
                    comp[(x, y, z)] = tbl
        ident = {x: flat((x, x), identity(x)) if (x, x) in hom else {} for x in self.objects}
        labels = {}
        for xy, keys in self.keys.items():
            if xy in pos:
                lab = [None] * len(keys)
                for n, k in enumerate(keys):
                    lab[pos[xy][n]] = label(k)
                labels[xy] = lab
        cat = DgCategory(F, self.objects, hom, comp, ident, labels=labels, check=False, name=name)
        cat.key_position = {xy: {k: pos[xy][n] for n, k in enumerate(keys)} for xy, keys in self.keys.items() if xy in pos}
        if check:
            rep = validate_category(cat)
            if not rep.ok:
                raise ValidationError(rep)
        return cat


# -- validation ---------------------------------------------------------------

def validate_category(a: DgCategory) -> Report:
    """Check units, d(1)=0, degree additivity, associativity and the Leibniz rule."""
    F = a.F
    rep = Report("dg category %s" % a.name if a.name else "dg category")
    for (x, y), h in a._hom.items():
        r = Report("")
        from .complexes import validate
        if not validate(h).ok:
            rep.add("d^2=0 in Hom(%s,%s)" % (x, y), False)
            return rep
    for x in a.objects:
        e = a.identity.get(x, {})
        hxx = a.hom(x, x)
        if not e:
            if hxx.total_dim or any(a.dim(x, y) or a.dim(y, x) for y in a.objects):
                rep.add("identity of %s" % x, False, "missing")
                return rep
            continue
        if hxx.degree_of(e) != 0:
            rep.add("identity of %s has degree 0" % x, False)
            return rep
        if not rep.add("d(1_%s)=0" % x, not a.d(x, x, e), ""):
            return rep
    for x, y in a.pairs():
        h = a.hom(x, y)
        for k in range(h.total_dim):
            f = {k: 1}
            if a.compose(x, y, y, a.identity.get(y, {}), f) != f:
                rep.add("left unit", False, "1_%s o %s" % (y, a.basis_label(x, y, k)))
                return rep
            if a.compose(x, x, y, f, a.identity.get(x, {})) != f:
                rep.add("right unit", False, "%s o 1_%s" % (a.basis_label(x, y, k), x))
                return rep
    rep.add("units", True)
    for x, y, z in itertools.product(a.objects, repeat=3):
        hf, hg, hh = a.hom(x, y), a.hom(y, z), a.hom(x, z)
        if not hf.total_dim or not hg.total_dim:
            continue
        for j in range(hf.total_dim):
            f = {j: 1}
            df = a.d(x, y, f)
            pf = hf.degrees[j]
            for i in range(hg.total_dim):
                g = {i: 1}
                pg = hg.degrees[i]
                gf = a.compose(x, y, z, g, f)
                if gf and any(hh.degrees[k] != pf + pg for k in gf):
                    rep.add("degree of composite", False, "%s o %s" % (a.basis_label(y, z, i), a.basis_label(x, y, j)))
                    return rep
                lhs = a.d(x, z, gf)
                rhs = a.compose(x, y, z, a.d(y, z, g), f)
                axpy(F, rhs, -1 if pg % 2 else 1, a.compose(x, y, z, g, df))
                if lhs != rhs:
                    rep.add("Leibniz", False, "d(%s o %s)" % (a.basis_label(y, z, i), a.basis_label(x, y, j)))
                    return rep
    rep.add("Leibniz", True)
    for w, x, y, z in itertools.product(a.objects, repeat=4):
        h1, h2, h3 = a.hom(w, x), a.hom(x, y), a.hom(y, z)
        if not (h1.total_dim and h2.total_dim and h3.total_dim):
            continue
        for i in range(h3.total_dim):
            for j in range(h2.total_dim):
                hg = a.compose(x, y, z, {i: 1}, {j: 1})
                for k in range(h1.total_dim):
                    lhs = a.compose(w, x, z, hg, {k: 1})
                    rhs = a.compose(w, y, z, {i: 1}, a.compose(w, x, y, {j: 1}, {k: 1}))
                    if lhs != rhs:
                        rep.add("associativity", False, "(%s, %s, %s)" % (
                            a.basis_label(y, z, i), a.basis_label(x, y, j), a.basis_label(w, x, k)))
                        return rep
    rep.add("associativity", True)
    return rep


# -- Z0 and H0 ------------------------------------------------------------------

class KCategory:
    """An ordinary finite-dimensional k-linear category."""

    def __init__(self, F, objects, dims, comp, identity, classify=None, lift=None):
        self.F = F
        self.objects = tuple(objects)
        self.dims = dict(dims)
        self.comp = comp
        self.identity = identity
        self._classify = classify or {}
        self._lift = lift or {}

    def dim(self, x, y) -> int:
        return self.dims.get((x, y), 0)

    def compose(self, x, y, z, g: dict, f: dict) -> dict:
        out: dict = {}
        tbl = self.comp.get((x, y, z), {})
        for i, a in g.items():
            for j, b in f.items():
                v = tbl.get((i, j))
                if v:
                    axpy(self.F, out, self.F.norm(a * b), v)
        return out

    def classify(self, x, y, v: dict):
        """Coordinates of a degree-0 morphism of the dg category (flat vector)."""
        return self._classify[(x, y)](v)

    def lift(self, x, y, c: dict) -> dict:
        return self._lift[(x, y)](c)

    def opposite(self) -> "KCategory":
        comp = {}
        for (x, y, z), tbl in self.comp.items():
            comp[(z, y, x)] = {(j, i): v for (i, j), v in tbl.items()}
        return KCategory(self.F, self.objects, {(y, x): n for (x, y), n in self.dims.items()},
                         comp, self.identity)

    def same_as(self, other: "KCategory") -> bool:
        keys = {k for k, n in self.dims.items() if n} | {k for k, n in other.dims.items() if n}
        if any(self.dim(*k) != other.dim(*k) for k in keys):
            return False
        trips = set(self.comp) | set(other.comp)
        norm = lambda t: {k: v for k, v in t.items() if v}
        return all(norm(self.comp.get(t, {})) == norm(other.comp.get(t, {})) for t in trips) and \
            {x: v for x, v in self.identity.items() if v} == {x: v for x, v in other.identity.items() if v}


def _degree_zero_data(a: DgCategory, x, y, cohomological: bool):
    h = a.hom(x, y)
    F = a.F
    if not h.dim(0):
        return [], (lambda v: [] if not v else None)
    if cohomological:
        Q = cohomology_space(h, 0)
        reps = [h.embed(r, 0) for r in Q.reps]

        def classify(v, Q=Q, h=h):
            if v and h.degree_of(v) != 0:
                return None
            return Q.coords(h.slice(v, 0))
    else:
        Z = kernel_basis(h.differential(0))
        reps = [h.embed(r, 0) for r in Z.basis]

        def classify(v, Z=Z, h=h):
            if v and h.degree_of(v) != 0:
                return None
            loc = h.slice(v, 0)
            return Z.coordinates(loc) if Z.contains(loc) else None
    return reps, classify


def _k_category(a: DgCategory, cohomological: bool) -> KCategory:
    F = a.F
    reps, classify = {}, {}
    for x, y in a.pairs():
        reps[(x, y)], classify[(x, y)] = _degree_zero_data(a, x, y, cohomological)
    dims = {k: len(r) for k, r in reps.items() if r}
    comp = {}
    for x, y, z in itertools.product(a.objects, repeat=3):
        if not (reps[(x, y)] and reps[(y, z)]):
            continue
        tbl = {}
        for i, g in enumerate(reps[(y, z)]):
            for j, f in enumerate(reps[(x, y)]):
                c = classify[(x, z)](a.compose(x, y, z, g, f))
                v = {k: b for k, b in enumerate(c) if b}
                if v:
                    tbl[(i, j)] = v
        comp[(x, y, z)] = tbl
    identity = {}
    for x in a.objects:
        if reps[(x, x)]:
            c = classify[(x, x)](a.identity.get(x, {}))
            identity[x] = {k: b for k, b in enumerate(c) if b}
        else:
            identity[x] = {}
    lift = {k: (lambda c, r=r: _combine(F, r, c)) for k, r in reps.items()}
    cls = {k: (lambda v, f=f: _as_dict(f(v))) for k, f in classify.items()}
    return KCategory(F, a.objects, dims, comp, identity, classify=cls, lift=lift)


def _as_dict(c):
    if c is None:
        return None
    return {k: b for k, b in enumerate(c) if b}


def _combine(F, vecs, coeffs: dict) -> dict:
    out: dict = {}
    for k, b in coeffs.items():
        axpy(F, out, b, vecs[k])
    return out


def z0(a: DgCategory) -> KCategory:
    return _k_category(a, cohomological=False)


def h0(a: DgCategory) -> KCategory:
    return _k_category(a, cohomological=True)


# -- opposite and tensor -------------------------------------------------------------

def opposite(a: DgCategory) -> DgCategory:
    F = a.F
    hom = {(y, x): h for (x, y), h in a._hom.items()}
    comp = {}
    for (x, y, z), tbl in a.comp.items():
        # g o f in A (f: x->y, g: y->z)  ==  f o^op g up to sign, in A^op(z, y, x)
        hf, hg = a.hom(x, y), a.hom(y, z)
        new = {}
        for (i, j), v in tbl.items():
            s = -1 if (hf.degrees[j] * hg.degrees[i]) % 2 else 1
            new[(j, i)] = v if s == 1 else scale(F, -1, v)
        comp[(z, y, x)] = new
    labels = {(y, x): l for (x, y), l in a.labels.items()}
    return DgCategory(F, a.objects, hom, comp, dict(a.identity), labels=labels,
                      check=False, name=(a.name + "^op") if a.name else "")


def tensor_label(x, y) -> str:
    return "%s*%s" % (x, y)


def tensor(a: DgCategory, b: DgCategory) -> DgCategory:
    """A (x) B with the Koszul sign rule on composition and differential."""
    if a.F != b.F:
        raise ValueError("field mismatch")
    F = a.F
    objs = [(x, y) for x in a.objects for y in b.objects]
    name = {o: tensor_label(*o) for o in objs}
    B = TableBuilder(F, [name[o] for o in objs])
    back = {name[o]: o for o in objs}
    for (x, y) in objs:
        for (x2, y2) in objs:
            ha, hb = a.hom(x, x2), b.hom(y, y2)
            keys = [(i, j) for i in range(ha.total_dim) for j in range(hb.total_dim)]
            degs = [ha.degrees[i] + hb.degrees[j] for i, j in keys]

            def bd(k, x=x, x2=x2, y=y, y2=y2, ha=ha):
                i, j = k
                out = {}
                for i2, c in a.d(x, x2, {i: 1}).items():
                    out[(i2, j)] = out.get((i2, j), 0) + c
                s = -1 if ha.degrees[i] % 2 else 1
                for j2, c in b.d(y, y2, {j: 1}).items():
                    out[(i, j2)] = out.get((i, j2), 0) + s * c
                return out
            B.set_hom(name[(x, y)], name[(x2, y2)], keys, degs, bd)

    def compose(p, q, r, kg, kf):
        (x, y), (x2, y2), (x3, y3) = back[p], back[q], back[r]
        i, j = kg        # a in A(x2,x3), b in B(y2,y3)
        i2, j2 = kf      # a' in A(x,x2), b' in B(y,y2)
        s = -1 if (b.hom(y2, y3).degrees[j] * a.hom(x, x2).degrees[i2]) % 2 else 1
        ga = a.compose(x, x2, x3, {i: 1}, {i2: 1})
        gb = b.compose(y, y2, y3, {j: 1}, {j2: 1})
        return {(u, v): s * c1 * c2 for u, c1 in ga.items() for v, c2 in gb.items()}

    def identity(p):
        x, y = back[p]
        return {(u, v): c1 * c2 for u, c1 in a.identity.get(x, {}).items()
                for v, c2 in b.identity.get(y, {}).items()}

    def label(k):
        return "%s(x)%s" % k

    cat = B.build(compose, identity, check=False, name="%s(x)%s" % (a.name or "A", b.name or "B"))
    cat.factors = (a, b)
    cat.pair_of = back
    return cat


def tensor_element(t: DgCategory, p, q, i: int, j: int) -> dict:
    """Flat vector of a_i (x) b_j in the tensor table ``t``."""
    return {t.key_position[(p, q)][(i, j)]: 1}


def koszul_commutativity_report(t: DgCategory) -> Report:
    """Check (a(x)1) o (1(x)b) = a(x)b = (-1)^{|a||b|} (1(x)b) o (a(x)1) on all basis pairs."""
    a, b = t.factors
    F = t.F
    rep = Report("Koszul commutativity")
    name = tensor_label
    for x, x2 in itertools.product(a.objects, repeat=2):
        ha = a.hom(x, x2)
        for y, y2 in itertools.product(b.objects, repeat=2):
            hb = b.hom(y, y2)
            if not ha.total_dim or not hb.total_dim:
                continue
            src, mid1, mid2, tgt = name(x, y), name(x, y2), name(x2, y), name(x2, y2)
            for i in range(ha.total_dim):
                for j in range(hb.total_dim):
                    ab = tensor_element(t, src, tgt, i, j)
                    # 1_x (x) b : x*y -> x*y2 ;  a (x) 1_y2 : x*y2 -> x2*y2
                    one_b = _tensor_vec(t, src, mid1, a.identity[x], {j: 1})
                    a_one = _tensor_vec(t, mid1, tgt, {i: 1}, b.identity[y2])
                    lhs = t.compose(src, mid1, tgt, a_one, one_b)
                    a_one2 = _tensor_vec(t, src, mid2, {i: 1}, b.identity[y])
                    one_b2 = _tensor_vec(t, mid2, tgt, a.identity[x2], {j: 1})
                    rhs = t.compose(src, mid2, tgt, one_b2, a_one2)
                    s = -1 if (ha.degrees[i] * hb.degrees[j]) % 2 else 1
                    ok = lhs == ab and scale(F, s, rhs) == ab
                    if not rep.add("%s, %s" % (a.basis_label(x, x2, i), b.basis_label(y, y2, j)), ok):
                        return rep
    return rep


def _tensor_vec(t, p, q, va: dict, vb: dict) -> dict:
    pos = t.key_position[(p, q)]
    F = t.F
    return {pos[(i, j)]: F.norm(c1 * c2) for i, c1 in va.items() for j, c2 in vb.items()}


# -- disc and sphere ---------------------------------------------------------------

def unit_category(F: Field, obj: str = "*") -> DgCategory:
    """The one-object dg category k."""
    B = TableBuilder(F, [obj])
    B.set_hom(obj, obj, ["1"], [0])
    return B.build(lambda x, y, z, g, f: {"1": 1}, lambda x: {"1": 1}, name="k")


def dg_algebra(F: Field, basis, degrees, mult, d=None, unit=None, obj: str = "*",
               name: str = "", check: bool = True) -> DgCategory:
    """One-object dg category from a graded algebra table.

    ``mult[(g, f)]`` is the product g*f (apply f first) as {basis: coeff};
    ``d[b]`` the differential; ``unit`` the unit as a dict (default: first basis element).
    """
    basis = list(basis)
    d = d or {}
    unit = unit or {basis[0]: 1}
    B = TableBuilder(F, [obj])
    B.set_hom(obj, obj, basis, degrees, lambda k: d.get(k, {}))
    return B.build(lambda x, y, z, g, f: mult.get((g, f), {}), lambda x: unit,
                   check=check, name=name)


def _two_object(F, n, with_delta: bool, name: str) -> DgCategory:
    B = TableBuilder(F, ["x", "y"])
    B.set_hom("x", "x", ["1x"], [0])
    B.set_hom("y", "y", ["1y"], [0])
    if with_delta:
        B.set_hom("x", "y", ["delta", "eps"], [-n, -n + 1],
                  lambda k: {"eps": 1} if k == "delta" else {})
    else:
        B.set_hom("x", "y", ["eps"], [-n + 1])

    def compose(x, y, z, g, f):
        if g in ("1x", "1y"):
            return {f: 1}
        if f in ("1x", "1y"):
            return {g: 1}
        return {}
    return B.build(compose, lambda x: {"1" + x: 1}, name=name)


def disc(n: int, F: Field | None = None) -> DgCategory:
    """D(n): objects x, y; Hom(x,y) = k.delta + k.eps with |delta|=-n, d(delta)=eps."""
    return _two_object(F or Field(), n, True, "D(%d)" % n)


def sphere(n: int, F: Field | None = None) -> DgCategory:
    """S(n): objects x, y; Hom(x,y) = k.eps with |eps| = -n."""
    return _two_object(F or Field(), n + 1, False, "S(%d)" % n)


# -- dg functors -------------------------------------------------------------------

class DgFunctor:
    """Object map plus, per pair, the matrix of F on Hom(x,y) -> Hom(Fx,Fy) in flat bases."""

    def __init__(self, source: DgCategory, target: DgCategory, objmap: dict, maps: dict,
                 name: str = ""):
        self.source = source
        self.target = target
        self.objmap = dict(objmap)
        self.maps = dict(maps)
        self.name = name

    def __call__(self, x, y, v: dict) -> dict:
        m = self.maps.get((x, y))
        if m is None or not v:
            return {}
        return m.apply(v)

    def obj(self, x):
        return self.objmap[x]

    def chain_map(self, x, y) -> ChainMap:
        """F_{x,y} as a degree-0 ChainMap of Hom complexes."""
        S = self.source.hom(x, y)
        T = self.target.hom(self.objmap[x], self.objmap[y])
        comps = {}
        for n in S.support:
            cols = []
            for k in range(S.dim(n)):
                img = self(x, y, {S.flat(n, k): 1})
                cols.append(T.slice(img, n))
            comps[n] = Matrix.from_columns(self.F, T.dim(n), cols)
        return ChainMap(S, T, 0, comps)

    @property
    def F(self):
        return self.source.F


def functor_from_images(source: DgCategory, target: DgCategory, objmap: dict, images,
                        name: str = "") -> DgFunctor:
    """``images(x, y, k)`` -> flat vector in target Hom(Fx,Fy) for basis element k."""
    maps = {}
    for x, y in source.pairs():
        h = source.hom(x, y)
        if not h.total_dim:
            continue
        rows = target.dim(objmap[x], objmap[y])
        maps[(x, y)] = Matrix.from_columns(source.F, rows, [images(x, y, k) for k in range(h.total_dim)])
    return DgFunctor(source, target, objmap, maps, name=name)


def identity_functor(a: DgCategory) -> DgFunctor:
    return functor_from_images(a, a, {x: x for x in a.objects}, lambda x, y, k: {k: 1}, name="Id")


def compose_functors(G: DgFunctor, F: DgFunctor) -> DgFunctor:
    return functor_from_images(F.source, G.target, {x: G.obj(F.obj(x)) for x in F.source.objects},
                               lambda x, y, k: G(F.obj(x), F.obj(y), F(x, y, {k: 1})),
                               name="%s.%s" % (G.name, F.name))


def validate_functor(f: DgFunctor) -> Report:
    A, B = f.source, f.target
    rep = Report("dg functor %s" % f.name if f.name else "dg functor")
    for x in A.objects:
        if f.objmap.get(x) not in B.objects:
            rep.add("object map", False, "%s has no image" % x)
            return rep
    for x, y in A.pairs():
        h = A.hom(x, y)
        fx, fy = f.obj(x), f.obj(y)
        H = B.hom(fx, fy)
        for k in range(h.total_dim):
            img = f(x, y, {k: 1})
            if img and any(H.degrees[j] != h.degrees[k] for j in img):
                rep.add("degree preserved", False, A.basis_label(x, y, k))
                return rep
            if f(x, y, A.d(x, y, {k: 1})) != B.d(fx, fy, img):
                rep.add("chain map", False, "F(d %s) != d F(%s)" % ((A.basis_label(x, y, k),) * 2))
                return rep
    rep.add("chain maps", True)
    for x in A.objects:
        if A.identity.get(x) and f(x, x, A.identity[x]) != B.identity.get(f.obj(x), {}):
            rep.add("identities", False, "F(1_%s)" % x)
            return rep
    rep.add("identities", True)
    for x, y, z in itertools.product(A.objects, repeat=3):
        hf, hg = A.hom(x, y), A.hom(y, z)
        for i in range(hg.total_dim):
            for j in range(hf.total_dim):
                lhs = f(x, z, A.compose(x, y, z, {i: 1}, {j: 1}))
                rhs = B.compose(f.obj(x), f.obj(y), f.obj(z), f(y, z, {i: 1}), f(x, y, {j: 1}))
                if lhs != rhs:
                    rep.add("composition", False, "F(%s o %s)" % (A.basis_label(y, z, i), A.basis_label(x, y, j)))
                    return rep
    rep.add("composition", True)
    return rep


def is_quasi_fully_faithful(f: DgFunctor) -> bool:
    return all(is_quasi_iso(f.chain_map(x, y)) for x, y in f.source.pairs())


def h0_inverse_pair(B: DgCategory, x, z, u: dict, v: dict):
    """None if u: x->z, v: z->x are mutually inverse in H0(B); else the failing composite."""
    F = B.F
    for p, q, g, f in ((x, z, v, u), (z, x, u, v)):
        for m, s, t in ((f, p, q), (g, q, p)):
            if m and (B.hom(s, t).degree_of(m) != 0 or B.d(s, t, m)):
                return "non-closed or non-degree-0 witness"
        comp = B.compose(p, q, p, g, f)
        axpy(F, comp, -1, B.identity.get(p, {}))
        h = B.hom(p, p)
        if comp:
            if not h.dim(-1):
                return "composite on %s is not homotopic to the identity" % p
            if solve(h.differential(-1), h.slice(comp, 0)) is None:
                return "composite on %s is not homotopic to the identity" % p
    return None


def find_h0_isomorphism(B: DgCategory, x, z, limit: int = 200000):
    """Exhaustive search over H0 classes (finite fields only); returns (u, v) or None."""
    F = B.F
    if not F.is_finite:
        raise ValueError("exhaustive isomorphism search needs a finite field")
    if x == z:
        return B.identity.get(x, {}), B.identity.get(x, {})
    H = h0(B)
    n, m = H.dim(x, z), H.dim(z, x)
    if n != m:
        return None
    if n == 0:
        # both objects zero in H0?
        ok = H.dim(x, x) == 0 and H.dim(z, z) == 0
        return ({}, {}) if ok else None
    if F.p ** (2 * n) > limit:
        raise ValueError("search space too large")
    for cu in itertools.product(range(F.p), repeat=n):
        if not any(cu):
            continue
        u = H.lift(x, z, {k: c for k, c in enumerate(cu) if c})
        for cv in itertools.product(range(F.p), repeat=n):
            if not any(cv):
                continue
            v = H.lift(z, x, {k: c for k, c in enumerate(cv) if c})
            if h0_inverse_pair(B, x, z, u, v) is None:
                return u, v
    return None


def is_quasi_equivalence(f: DgFunctor, iso_witnesses=None) -> Report:
    """Quasi-fully faithful plus H0-density, certified per target object.

    ``iso_witnesses`` maps a target object z to ``(x, u, v)`` with u: F(x) -> z and
    v: z -> F(x) closed of degree 0 and mutually inverse in H0.
    """
    rep = Report("quasi-equivalence")
    rep.add("quasi-fully faithful", is_quasi_fully_faithful(f))
    B = f.target
    image = {f.obj(x): x for x in f.source.objects}
    witnesses = dict(iso_witnesses or {})
    for z in B.objects:
        if z in image:
            continue
        if z in witnesses:
            x, u, v = witnesses[z]
            err = h0_inverse_pair(B, f.obj(x), z, u, v)
            rep.add("dense at %s" % z, err is None, err or "witness from %s" % x)
            continue
        if B.F.is_finite:
            found = None
            for x in f.source.objects:
                try:
                    found = find_h0_isomorphism(B, f.obj(x), z)
                except ValueError:
                    found = None
                if found:
                    break
            rep.add("dense at %s" % z, bool(found), "exhaustive search" if found else "no isomorphic image found")
        else:
            rep.add("dense at %s" % z, False, "no witness supplied")
    return rep
