"""
Twisted complexes and the pretriangulated hull.

A twisted object is a list of entries (x, s), read as Sigma^s x, with a strictly
upper-triangular matrix delta.  Morphisms are matrices of underlying morphisms:
a degree-p map (x, s) -> (y, t) is an element of A(x, y) of degree p - s + t.
Composition is plain matrix multiplication; the entrywise differential is
(-1)^t d on the underlying element, and the twisted differential is
D(f) = d(f) + delta' f - (-1)^p f delta.  Maurer-Cartan: d(delta) + delta^2 = 0.
"""

from __future__ import annotations

import itertools
import random

from .category import DgCategory, TableBuilder
from .complexes import Complex, build_complex
from .constructions import mor_category, mor_parts
from .linalg import Matrix, Subspace, axpy, kernel_basis, scale, solve
from .report import Report, ValidationError


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class TwistedObject:

    def __init__(self, base: DgCategory, entries, delta: dict | None = None, name: str = "",
                 check: bool = True):
        self.base = base
        self.entries = [(x, int(s)) for x, s in entries]
        for x, _ in self.entries:
            if x not in base.objects:
                raise ValueError("unknown base object %r" % (x,))
        self.delta = {k: v for k, v in (delta or {}).items() if v}
        self.name = name
        if check:
            rep = validate_twisted(self)
            if not rep.ok:
                raise ValidationError(rep)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return "TwistedObject(%s)" % ", ".join("S^%d %s" % (s, x) if s else str(x) for x, s in self.entries)


def entry_degree(p: int, s: int, t: int) -> int:
    """Underlying degree of a degree-p map (x, s) -> (y, t)."""
    return p - s + t


def _entry_d(A: DgCategory, x, y, t: int, v: dict) -> dict:
    d = A.d(x, y, v)
    return d if t % 2 == 0 else scale(A.F, -1, d)


def mat_compose(A: DgCategory, T1: TwistedObject, T2: TwistedObject, T3: TwistedObject,
                g: dict, f: dict) -> dict:
    """(g o f)_{ij} = sum_k g_{ik} o f_{kj}; f: T1 -> T2, g: T2 -> T3."""
    out: dict = {}
    for (k, j), fv in f.items():
        for (i, k2), gv in g.items():
            if k2 != k:
                continue
            v = A.compose(T1.entries[j][0], T2.entries[k][0], T3.entries[i][0], gv, fv)
            if v:
                axpy(A.F, out.setdefault((i, j), {}), 1, v)
    return {k: v for k, v in out.items() if v}


def mat_add(F, f: dict, g: dict, c=1) -> dict:
    out = {k: dict(v) for k, v in f.items()}
    for k, v in g.items():
        axpy(F, out.setdefault(k, {}), c, v)
    return {k: v for k, v in out.items() if v}


def mat_scale(F, c, f: dict) -> dict:
    return {k: scale(F, c, v) for k, v in f.items() if c}


def mat_d(A: DgCategory, T: TwistedObject, T2: TwistedObject, f: dict, p: int) -> dict:
    """Twisted differential D(f) of a degree-p matrix f: T -> T2."""
    F = A.F
    out: dict = {}
    for (i, j), v in f.items():
        y, t = T2.entries[i]
        dv = _entry_d(A, T.entries[j][0], y, t, v)
        if dv:
            axpy(F, out.setdefault((i, j), {}), 1, dv)
    out = {k: v for k, v in out.items() if v}
    out = mat_add(F, out, mat_compose(A, T, T2, T2, T2.delta, f))
    out = mat_add(F, out, mat_compose(A, T, T, T2, f, T.delta), -_sign(p))
    return out


def mat_identity(A: DgCategory, T: TwistedObject) -> dict:
    return {(i, i): dict(A.identity.get(x, {})) for i, (x, _) in enumerate(T.entries) if A.identity.get(x)}


def mat_degree(A: DgCategory, T: TwistedObject, T2: TwistedObject, f: dict):
    degs = set()
    for (i, j), v in f.items():
        u = A.hom(T.entries[j][0], T2.entries[i][0]).degree_of(v)
        degs.add(u + T.entries[j][1] - T2.entries[i][1])
    if len(degs) > 1:
        raise ValueError("inhomogeneous twisted morphism")
    return degs.pop() if degs else None


def validate_twisted(T: TwistedObject) -> Report:
    A = T.base
    rep = Report("twisted object %s" % T.name)
    for (i, j), v in T.delta.items():
        if not i < j:
            rep.add("strictly upper triangular", False, "delta_%d%d" % (i, j))
            return rep
        (x, s), (y, t) = T.entries[j], T.entries[i]
        h = A.hom(x, y)
        try:
            deg = h.degree_of(v)
        except ValueError:
            deg = None
        if deg != entry_degree(1, s, t):
            rep.add("delta degree one", False, "delta_%d%d" % (i, j))
            return rep
    rep.add("delta shape", True)
    mc = mat_add(A.F, {k: v for k, v in ((k, _entry_d(A, T.entries[k[1]][0], T.entries[k[0]][0],
                                                         T.entries[k[0]][1], v))
                                         for k, v in T.delta.items()) if v},
                 mat_compose(A, T, T, T, T.delta, T.delta))
    rep.add("Maurer-Cartan d(delta) + delta^2 = 0", not mc, "" if not mc else "entries %s" % sorted(mc))
    return rep


class TwistedHom:
    """Hom(T, T2) as a complex; basis keys (i, j, k) with k a basis element of A(x_j, y_i)."""

    def __init__(self, T: TwistedObject, T2: TwistedObject):
        if T.base is not T2.base:
            raise ValueError("twisted objects over different bases")
        A = T.base
        self.T, self.T2, self.A = T, T2, A
        keys, degs = [], []
        for i, (y, t) in enumerate(T2.entries):
            for j, (x, s) in enumerate(T.entries):
                h = A.hom(x, y)
                for k in range(h.total_dim):
                    keys.append((i, j, k))
                    degs.append(h.degrees[k] + s - t)
        self.keys = keys
        self.index = {k: n for n, k in enumerate(keys)}
        self.key_degree = degs

        def bd(n):
            i, j, k = keys[n]
            p = degs[n]
            m = mat_d(A, T, T2, {(i, j): {k: 1}}, p)
            return {self.index[(a, b, c)]: v for (a, b), vec in m.items() for c, v in vec.items()}
        self.complex, self.pos = build_complex(A.F, degs, bd)

    def to_matrix(self, v: dict) -> dict:
        """Flat vector of the complex -> matrix {(i, j): underlying vector}."""
        inv = {p: n for n, p in enumerate(self.pos)}
        out: dict = {}
        for p, c in v.items():
            i, j, k = self.keys[inv[p]]
            out.setdefault((i, j), {})[k] = c
        return out

    def from_matrix(self, m: dict) -> dict:
        out = {}
        for (i, j), vec in m.items():
            for k, c in vec.items():
                if c:
                    out[self.pos[self.index[(i, j, k)]]] = c
        return out


def twisted_hom(T: TwistedObject, T2: TwistedObject) -> Complex:
    for X in (T, T2):
        rep = validate_twisted(X)
        if not rep.ok:
            raise ValidationError(rep)
    return TwistedHom(T, T2).complex


def hull_category(A: DgCategory, objects: dict, check: bool = True, name: str = "") -> DgCategory:
    """The dg category on the named twisted objects (a finite piece of the hull)."""
    F = A.F
    for nm, T in objects.items():
        rep = validate_twisted(T)
        if not rep.ok:
            raise ValidationError(rep)
    Bld = TableBuilder(F, list(objects))
    for s, T in objects.items():
        for t, T2 in objects.items():
            keys, degs = [], []
            for i, (y, ty) in enumerate(T2.entries):
                for j, (x, sx) in enumerate(T.entries):
                    h = A.hom(x, y)
                    for k in range(h.total_dim):
                        keys.append((i, j, k))
                        degs.append(h.degrees[k] + sx - ty)

            def bd(key, T=T, T2=T2):
                i, j, k = key
                y, ty = T2.entries[i]
                x, sx = T.entries[j]
                p = A.hom(x, y).degrees[k] + sx - ty
                m = mat_d(A, T, T2, {(i, j): {k: 1}}, p)
                return {(a, b, c): v for (a, b), vec in m.items() for c, v in vec.items()}
            Bld.set_hom(s, t, keys, degs, bd)

    def compose(s, t, u, kg, kf):
        (i, k2, a), (k, j, b) = kg, kf
        if k != k2:
            return {}
        T1, T2, T3 = objects[s], objects[t], objects[u]
        v = A.compose(T1.entries[j][0], T2.entries[k][0], T3.entries[i][0], {a: 1}, {b: 1})
        return {(i, j, c): x for c, x in v.items()}

    def identity(s):
        T = objects[s]
        return {(i, i, c): x for (i, _), v in mat_identity(A, T).items() for c, x in v.items()}

    cat = Bld.build(compose, identity, check=check, name=name or "pretr(%s)" % (A.name or "A"),
                    label=lambda k: "[%d,%d]%d" % k)
    cat.base = A
    cat.twisted = dict(objects)
    return cat


def hull_vector(H: DgCategory, s, t, m: dict) -> dict:
    """Matrix {(i,j): underlying vec} -> flat vector in H(s, t)."""
    pos = H.key_position.get((s, t), {})
    out = {}
    for (i, j), vec in m.items():
        for k, c in vec.items():
            if c:
                out[pos[(i, j, k)]] = c
    return out


def hull_matrix(H: DgCategory, s, t, v: dict) -> dict:
    inv = {p: k for k, p in H.key_position.get((s, t), {}).items()}
    out: dict = {}
    for p, c in v.items():
        i, j, k = inv[p]
        out.setdefault((i, j), {})[k] = c
    return out


# -- suspensions and cones -------------------------------------------------------

class SuspensionWitness:
    """xi: Sigma(x) -> x closed of degree one with inverse xi_inv, in category ``cat``."""

    def __init__(self, cat: DgCategory, x, sx, xi: dict, xi_inv: dict):
        self.cat, self.x, self.sx, self.xi, self.xi_inv = cat, x, sx, xi, xi_inv

    def report(self) -> Report:
        E = self.cat
        rep = Report("suspension witness %s" % self.x)
        h = E.hom(self.sx, self.x)
        rep.add("xi degree 1", bool(self.xi) and h.degree_of(self.xi) == 1)
        rep.add("xi closed", not E.d(self.sx, self.x, self.xi))
        rep.add("xi o xi^-1 = 1", E.compose(self.x, self.sx, self.x, self.xi, self.xi_inv) == E.identity.get(self.x, {}))
        rep.add("xi^-1 o xi = 1", E.compose(self.sx, self.x, self.sx, self.xi_inv, self.xi) == E.identity.get(self.sx, {}))
        return rep


class ConeWitness:
    """Cone(f) for f: x -> y closed of degree 0, with j, p, t, s and the suspension witness of x."""

    def __init__(self, cat: DgCategory, x, y, f: dict, cone, j: dict, p: dict, t: dict, s: dict,
                 susp: SuspensionWitness):
        self.cat, self.x, self.y, self.f, self.cone = cat, x, y, f, cone
        self.j, self.p, self.t, self.s, self.susp = j, p, t, s, susp


def suspend_twisted(T: TwistedObject, name: str = ""):
    """Sigma T: shifts +1, delta negated.  Returns (Sigma T, xi as a matrix Sigma T -> T, xi^-1)."""
    A = T.base
    S = TwistedObject(A, [(x, s + 1) for x, s in T.entries],
                      {k: scale(A.F, -1, v) for k, v in T.delta.items()}, name=name or "S" + T.name)
    ident = mat_identity(A, T)
    return S, ident, dict(ident)


def cone_twisted(f: dict, T: TwistedObject, T2: TwistedObject, name: str = ""):
    """Cone of a closed degree-0 matrix f: T -> T2, as T2 + Sigma T.

    Returns (cone, witness) where the witness lives in the hull on
    {x: T, y: T2, Sx: Sigma T, C: cone}.
    """
    A = T.base
    F = A.F
    deg = mat_degree(A, T, T2, f)
    if deg not in (0, None):
        raise ValueError("cone needs a degree-0 morphism")
    if mat_d(A, T, T2, f, 0):
        raise ValueError("cone needs a closed morphism")
    S, xi, xi_inv = suspend_twisted(T)
    n2 = len(T2)
    delta = dict(T2.delta)
    for (i, j), v in S.delta.items():
        delta[(n2 + i, n2 + j)] = v
    for (i, j), v in f.items():
        delta[(i, n2 + j)] = dict(v)
    C = TwistedObject(A, T2.entries + S.entries, delta, name=name or "Cone")
    H = hull_category(A, {"x": T, "y": T2, "Sx": S, "C": C}, check=False)
    w = _cone_witness(H, "x", "y", "Sx", "C", f, xi, xi_inv, len(T2), len(T))
    return C, w


def _cone_witness(H, x, y, sx, c, f, xi, xi_inv, n2, n1) -> ConeWitness:
    A = H.base
    one = lambda o: A.identity.get(o, {})
    T2 = H.twisted[y]
    S = H.twisted[sx]
    j = {(i, i): one(T2.entries[i][0]) for i in range(n2)}
    t = {(i, i): one(T2.entries[i][0]) for i in range(n2)}
    s = {(n2 + i, i): one(S.entries[i][0]) for i in range(n1)}
    p = {(i, n2 + i): one(S.entries[i][0]) for i in range(n1)}
    susp = SuspensionWitness(H, x, sx, hull_vector(H, sx, x, xi), hull_vector(H, x, sx, xi_inv))
    return ConeWitness(H, x, y, hull_vector(H, x, y, f), c, hull_vector(H, y, c, j), hull_vector(H, c, sx, p),
                       hull_vector(H, c, y, t), hull_vector(H, sx, c, s), susp)


def verify_cone_axioms(w: ConeWitness) -> Report:
    E = w.cat
    F = E.F
    x, y, c, sx = w.x, w.y, w.cone, w.susp.sx
    rep = Report("cone axioms")
    rep.extend(w.susp.report())
    comp = E.compose
    one = lambda o: E.identity.get(o, {})
    deg0 = all(not v or E.hom(a, b).degree_of(v) == 0
               for v, a, b in ((w.j, y, c), (w.p, c, sx), (w.t, c, y), (w.s, sx, c)))
    rep.add("j, p, t, s of degree 0", deg0)
    rep.add("f closed of degree 0", (not w.f or E.hom(x, y).degree_of(w.f) == 0) and not E.d(x, y, w.f))
    rep.add("(C1) t o j = 1", comp(y, c, y, w.t, w.j) == one(y))
    rep.add("(C1) p o s = 1", comp(sx, c, sx, w.p, w.s) == one(sx))
    js = comp(c, y, c, w.j, w.t)
    axpy(F, js, 1, comp(c, sx, c, w.s, w.p))
    rep.add("(C1) j o t + s o p = 1", js == one(c))
    rep.add("(C1) p o j = 0", not comp(y, c, sx, w.p, w.j))
    rep.add("(C1) t o s = 0", not comp(sx, c, y, w.t, w.s))
    rep.add("(C2) d(j) = 0", not E.d(y, c, w.j))
    rep.add("(C2) d(p) = 0", not E.d(c, sx, w.p))
    ds, dt = E.d(sx, c, w.s), E.d(c, y, w.t)
    lhs1 = E.chain([x, sx, c, y], [w.susp.xi_inv, ds, w.t])
    lhs2 = scale(F, -1, E.chain([x, sx, c, y], [w.susp.xi_inv, w.s, dt]))
    rep.add("(C3) f = t d(s) xi^-1", lhs1 == w.f)
    rep.add("(C3) f = -d(t) s xi^-1", lhs2 == w.f)
    rep.add("d(s) = j f xi", ds == E.chain([sx, x, y, c], [w.susp.xi, w.f, w.j]))
    rep.add("d(t) = -f xi p", dt == scale(F, -1, E.chain([c, sx, x, y], [w.p, w.susp.xi, w.f])))
    return rep


# -- exact closures and the cone functor ------------------------------------------------

class ExactData:
    """A hull table together with suspension and cone witnesses on named objects."""

    def __init__(self, cat: DgCategory, suspensions: dict, cones: dict):
        self.cat = cat
        self.suspensions = suspensions   # x -> SuspensionWitness
        self.cones = cones               # label -> ConeWitness


def exact_closure(A: DgCategory, objects: dict, morphisms: dict, check: bool = True) -> ExactData:
    """Hull on ``objects`` plus suspensions of all of them and cones of the given morphisms.

    ``morphisms[label] = (src, tgt, matrix)`` with matrix a closed degree-0 twisted map.
    Objects added: "S<name>", "D<name>" (desuspension) and "C<label>".
    """
    objs = dict(objects)
    susp, desusp = {}, {}
    for nm, T in objects.items():
        S, xi, xi_inv = suspend_twisted(T, name="S" + nm)
        objs["S" + nm] = S
        susp[nm] = (xi, xi_inv)
        D = TwistedObject(A, [(x, s - 1) for x, s in T.entries],
                          {k: scale(A.F, -1, v) for k, v in T.delta.items()}, name="D" + nm)
        objs["D" + nm] = D
        desusp[nm] = mat_identity(A, T)
    cone_specs = {}
    for lab, (src, tgt, f) in morphisms.items():
        C, _ = cone_twisted(f, objects[src], objects[tgt], name="C" + lab)
        objs["C" + lab] = C
        cone_specs[lab] = (src, tgt, f)
    H = hull_category(A, objs, check=check)
    sw = {nm: SuspensionWitness(H, nm, "S" + nm, hull_vector(H, "S" + nm, nm, xi),
                                hull_vector(H, nm, "S" + nm, xi_inv))
          for nm, (xi, xi_inv) in susp.items()}
    for nm, ident in desusp.items():
        sw["D" + nm] = SuspensionWitness(H, "D" + nm, nm, hull_vector(H, nm, "D" + nm, ident),
                                         hull_vector(H, "D" + nm, nm, ident))
    cones = {}
    for lab, (src, tgt, f) in cone_specs.items():
        xi, xi_inv = susp[src]
        cones[lab] = _cone_witness(H, src, tgt, "S" + src, "C" + lab, f, xi, xi_inv,
                                   len(objects[tgt]), len(objects[src]))
    return ExactData(H, sw, cones)


def cone_image(E: ExactData, M: DgCategory, s, t, m: dict) -> dict:
    """Cone functor on a mor(E)-morphism: (-1)^{|a|} s' S(a) p + j' b t + j' h xi p.

    With S(a) = (-1)^{|a|} xi'^{-1} a xi this is s' xi'^{-1} a xi p + j' b t + j' h xi p.
    """
    H = E.cat
    F = H.F
    w1, w2 = E.cones[s], E.cones[t]
    al, h, be = mor_parts(M, s, t, m)
    x, y, x2, y2 = w1.x, w1.y, w2.x, w2.y
    c1, c2 = w1.cone, w2.cone
    xi1 = w1.susp.xi
    xi2inv = w2.susp.xi_inv
    sx1, sx2 = w1.susp.sx, w2.susp.sx
    out: dict = {}
    if al:
        axpy(F, out, 1, H.chain([c1, sx1, x, x2, sx2, c2], [w1.p, xi1, al, xi2inv, w2.s]))
    if be:
        axpy(F, out, 1, H.chain([c1, y, y2, c2], [w1.t, be, w2.j]))
    if h:
        axpy(F, out, 1, H.chain([c1, sx1, x, y2, c2], [w1.p, xi1, h, w2.j]))
    return out


def sigma_map(E: ExactData, x, x2, a: dict) -> dict:
    """S(a) = (-1)^{|a|} xi_{x2}^{-1} a xi_x."""
    H = E.cat
    w1, w2 = E.suspensions[x], E.suspensions[x2]
    if not a:
        return {}
    deg = H.hom(x, x2).degree_of(a)
    v = H.chain([w1.sx, x, x2, w2.sx], [w1.xi, a, w2.xi_inv])
    return scale(H.F, _sign(deg), v)


def _random_hom(rng, h: Complex, F, p=None):
    degs = [q for q in h.support]
    if not degs:
        return None, {}
    if p is None:
        p = rng.choice(degs)
    off, n = h.offset.get(p), h.dim(p)
    if off is None:
        return p, {}
    v = {off + k: F(rng.randint(-2, 2)) for k in range(n)}
    return p, {k: c for k, c in v.items() if c}


def cone_functor_check(E: ExactData, samples: int = 50, seed: int = 0) -> Report:
    """Check that the cone assignment is a dg functor mor(E) -> E on the cone witnesses of E."""
    H = E.cat
    F = H.F
    rep = Report("cone dg functor")
    objs = [(lab, w.x, w.y, w.f) for lab, w in E.cones.items()]
    M = mor_category(H, objs, check=False)
    labels = list(E.cones)
    for lab in labels:
        img = cone_image(E, M, lab, lab, M.identity[lab])
        rep.add("identity at %s" % lab, img == H.identity.get(E.cones[lab].cone, {}))
    rng = random.Random(seed)
    triples = [(a, b, c) for a in labels for b in labels for c in labels
               if M.hom(a, b).total_dim and M.hom(b, c).total_dim]
    comp_ok = d_ok = True
    tested = 0
    for _ in range(samples):
        if not triples:
            break
        a, b, c = rng.choice(triples)
        p, m1 = _random_hom(rng, M.hom(a, b), F)
        q, m2 = _random_hom(rng, M.hom(b, c), F)
        ca, cb, cc = E.cones[a].cone, E.cones[b].cone, E.cones[c].cone
        lhs = cone_image(E, M, a, c, M.compose(a, b, c, m2, m1))
        rhs = H.compose(ca, cb, cc, cone_image(E, M, b, c, m2), cone_image(E, M, a, b, m1))
        comp_ok = comp_ok and lhs == rhs
        d_ok = d_ok and cone_image(E, M, a, b, M.d(a, b, m1)) == H.d(ca, cb, cone_image(E, M, a, b, m1))
        tested += 1
    rep.add("preserves composition", comp_ok, "%d random pairs" % tested)
    rep.add("commutes with d", d_ok)
    # the commutative diagram for closed degree-0 morphisms
    diag_ok = True
    for a in labels:
        for b in labels:
            h = M.hom(a, b)
            if not h.dim(0):
                continue
            Z = kernel_basis(h.differential(0)) if h.dim(1) else None
            basis = Z.basis if Z is not None else [{k: 1} for k in range(h.dim(0))]
            for z in basis:
                m = h.embed(z, 0)
                al, hh, be = mor_parts(M, a, b, m)
                w1, w2 = E.cones[a], E.cones[b]
                img = cone_image(E, M, a, b, m)
                left = H.compose(w1.y, w1.cone, w2.cone, img, w1.j)
                right = H.compose(w1.y, w2.y, w2.cone, w2.j, be)
                top = H.compose(w1.cone, w2.cone, w2.susp.sx, w2.p, img)
                bottom = H.compose(w1.cone, w1.susp.sx, w2.susp.sx, sigma_map(E, w1.x, w2.x, al), w1.p)
                diag_ok = diag_ok and left == right and top == bottom
    rep.add("j, p compatibility for closed degree-0 morphisms", diag_ok)
    rep.data["samples"] = tested
    return rep


# -- exactness --------------------------------------------------------------------

def find_suspension(E: DgCategory, x, limit: int = 4096):
    """Search for (z, xi, xi_inv) with xi: z -> x a closed degree-1 isomorphism.

    Over a finite field the closed degree-1 maps are enumerated (up to ``limit``);
    over Q only basis cycles are tried.  Returns None when nothing is found.
    """
    F = E.F
    for z in E.objects:
        h, hinv = E.hom(z, x), E.hom(x, z)
        if not h.dim(1) or not hinv.dim(-1):
            continue
        Z = kernel_basis(h.differential(1)) if h.dim(2) else None
        cyc = Z.basis if Z is not None else [{k: 1} for k in range(h.dim(1))]
        if not cyc:
            continue
        if F.is_finite and F.p ** len(cyc) <= limit:
            cands = []
            for cs in itertools.product(range(F.p), repeat=len(cyc)):
                v: dict = {}
                for c, b in zip(cs, cyc):
                    if c:
                        axpy(F, v, c, b)
                if v:
                    cands.append(v)
        else:
            cands = cyc
        for v in cands:
            xi = h.embed(v, 1)
            # solve for xi_inv in hinv^{-1}: xi o w = 1_x and w o xi = 1_z
            n = hinv.dim(-1)
            cols = []
            for k in range(n):
                w = hinv.embed({k: 1}, -1)
                a = E.compose(x, z, x, xi, w)
                b = E.compose(z, x, z, w, xi)
                col = dict(a)
                off = E.dim(x, x)
                for kk, c in b.items():
                    col[off + kk] = c
                cols.append(col)
            rhs = dict(E.identity.get(x, {}))
            for kk, c in E.identity.get(z, {}).items():
                rhs[E.dim(x, x) + kk] = c
            mat = Matrix.from_columns(F, E.dim(x, x) + E.dim(z, z), cols)
            sol = solve(mat, rhs)
            if sol is not None:
                return z, xi, hinv.embed(sol, -1)
    return None


def is_exact(E: DgCategory, suspensions: dict | None = None, cones: dict | None = None,
             scope=None, search: bool = True) -> Report:
    """Certify exactness on the supplied witness closure.

    Objects in ``scope`` (default: all) need a suspension witness, need to be the
    suspension of some object, and every pair in scope needs cones for a basis of
    its closed degree-0 maps.  Missing suspensions are searched for when ``search``
    is set.  All supplied witnesses are verified.
    """
    rep = Report("exactness")
    scope = list(E.objects if scope is None else scope)
    suspensions = dict(suspensions or {})
    cones = dict(cones or {})
    missing, image = [], set()
    for w in suspensions.values():
        r = w.report()
        rep.add("suspension of %s" % w.x, r.ok, w.sx)
        if r.ok:
            image.add(w.sx)
    for x in scope:
        w = suspensions.get(x)
        if w is None and search:
            found = find_suspension(E, x)
            if found is not None:
                z, xi, xi_inv = found
                w = SuspensionWitness(E, x, z, xi, xi_inv)
                rep.add("suspension of %s (found)" % x, w.report().ok, z)
        if w is None:
            missing.append(x)
    rep.add("every object has a suspension", not missing,
            "missing: %s" % ", ".join(map(str, missing)) if missing else "")
    if not missing:
        not_hit = [z for z in scope if z not in image]
        rep.add("Sigma dense", not not_hit,
                "not a suspension: %s" % ", ".join(map(str, not_hit)) if not_hit else "")
    covered: dict = {}
    for lab, w in cones.items():
        r = verify_cone_axioms(w)
        rep.add("cone %s" % lab, r.ok, r.first_failure.name if not r.ok else "")
        covered.setdefault((w.x, w.y), []).append(w.f)
    lacking = []
    for x in scope:
        for y in scope:
            h = E.hom(x, y)
            if not h.dim(0):
                continue
            Z = kernel_basis(h.differential(0)) if h.dim(1) else None
            dimz = Z.dim if Z is not None else h.dim(0)
            have = [h.slice(f, 0) for f in covered.get((x, y), []) if f]
            span = Subspace(E.F, h.dim(0), have).dim if have else 0
            if span < dimz:
                lacking.append("%s->%s" % (x, y))
    rep.add("cones for a basis of closed degree-0 maps", not lacking,
            "lacking: %s" % ", ".join(lacking) if lacking else "")
    rep.data["missing_suspensions"] = missing
    rep.data["lacking_cones"] = lacking
    return rep
