"""
Finite-dimensional algebras (basis plus multiplication table), bounded
quiver path algebras and finite-dimensional modules over them.

Products are written in composition order: ``mul(b, a)`` is "a then b".
For a path algebra an arrow ``a: i -> j`` satisfies ``a = e_j a e_i``.
"""

from __future__ import annotations

import itertools

from .linalg import Echelon, Field, Matrix, Subspace, axpy, image_basis, kernel_basis
from .report import Report, ValidationError


class Algebra:

    def __init__(self, F: Field, basis, table: dict, unit: dict, name: str = "", check: bool = True):
        self.F = F
        self.basis = list(basis)
        self.index = {b: k for k, b in enumerate(self.basis)}
        # table[(i, j)] = b_i * b_j
        self.table = {k: v for k, v in table.items() if v}
        self.unit = dict(unit)
        self.name = name
        self.idempotents: dict = {}
        if check:
            rep = validate_algebra(self)
            if not rep.ok:
                raise ValidationError(rep)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def mul(self, u: dict, v: dict) -> dict:
        F = self.F
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                w = self.table.get((i, j))
                if w:
                    axpy(F, out, F.norm(a * b), w)
        return out

    def element(self, spec) -> dict:
        """Parse a basis label, an idempotent name or a {label: coeff} dict."""
        if isinstance(spec, dict):
            out: dict = {}
            for k, c in spec.items():
                axpy(self.F, out, self.F(c), self.element(k))
            return out
        if spec in self.idempotents:
            return dict(self.idempotents[spec])
        if spec in self.index:
            return {self.index[spec]: 1}
        if spec in ("1", 1):
            return dict(self.unit)
        if spec in ("0", 0):
            return {}
        raise KeyError("unknown algebra element %r" % (spec,))

    def is_idempotent(self, e: dict) -> bool:
        return self.mul(e, e) == {k: v for k, v in e.items() if v}

    def left_mult(self, u: dict) -> Matrix:
        return Matrix.from_columns(self.F, self.dim, [self.mul(u, {k: 1}) for k in range(self.dim)])

    def right_mult(self, u: dict) -> Matrix:
        return Matrix.from_columns(self.F, self.dim, [self.mul({k: 1}, u) for k in range(self.dim)])

    def corner(self, e: dict, f: dict) -> Subspace:
        """The subspace e A f."""
        return image_basis(self.left_mult(e) @ self.right_mult(f))

    def ideal(self, e: dict) -> Subspace:
        """The two-sided ideal A e A."""
        vecs = []
        for i in range(self.dim):
            ae = self.mul({i: 1}, e)
            for j in range(self.dim):
                vecs.append(self.mul(ae, {j: 1}))
        return Subspace(self.F, self.dim, vecs)

    def format(self, v: dict) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v):
            c = self.F.format(v[k])
            parts.append(self.basis[k] if c == "1" else "%s*%s" % (c, self.basis[k]))
        return " + ".join(parts)

    def __repr__(self):
        return "Algebra(%s%s, dim=%d)" % (self.name + " " if self.name else "", self.F, self.dim)


def validate_algebra(A: Algebra) -> Report:
    rep = Report("algebra %s" % A.name if A.name else "algebra")
    n = A.dim
    for i in range(n):
        if A.mul(A.unit, {i: 1}) != {i: 1} or A.mul({i: 1}, A.unit) != {i: 1}:
            rep.add("unit", False, A.basis[i])
            return rep
    rep.add("unit", True)
    for i, j, k in itertools.product(range(n), repeat=3):
        if A.mul(A.mul({i: 1}, {j: 1}), {k: 1}) != A.mul({i: 1}, A.mul({j: 1}, {k: 1})):
            rep.add("associativity", False, "(%s,%s,%s)" % (A.basis[i], A.basis[j], A.basis[k]))
            return rep
    rep.add("associativity", True)
    return rep


def algebra_from_table(F: Field, basis, products: dict, unit=None, name: str = "") -> Algebra:
    """``products[(a, b)]`` = a*b as {label: coeff}; missing products are zero.

    ``unit`` defaults to the first basis element.
    """
    basis = list(basis)
    idx = {b: k for k, b in enumerate(basis)}
    table = {}
    for (a, b), v in products.items():
        table[(idx[a], idx[b])] = {idx[k]: F(c) for k, c in v.items() if F(c)}
    if unit is None:
        unit = {0: 1}
    elif isinstance(unit, dict):
        unit = {idx[k]: F(c) for k, c in unit.items()}
    else:
        unit = {idx[unit]: 1}
    return Algebra(F, basis, table, unit, name=name)


def truncated_polynomial(F: Field, n: int, var: str = "t", name: str = "") -> Algebra:
    """k[t]/(t^n)."""
    labels = ["1"] + [var if k == 1 else "%s^%d" % (var, k) for k in range(1, n)]
    products = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                products[(labels[i], labels[j])] = {labels[i + j]: 1}
    return algebra_from_table(F, labels, products, unit="1", name=name or "%s[%s]/(%s^%d)" % (F, var, var, n))


# -- quivers --------------------------------------------------------------------

class Quiver:
    def __init__(self, vertices, arrows: dict):
        self.vertices = [str(v) for v in vertices]
        self.arrows = {str(a): (str(s), str(t)) for a, (s, t) in arrows.items()}
        for a, (s, t) in self.arrows.items():
            if s not in self.vertices or t not in self.vertices:
                raise ValueError("arrow %s has an unknown endpoint" % a)

    def paths(self, length: int):
        """Paths of the given length as tuples in composition order (last entry first)."""
        if length == 0:
            return [("e", v) for v in self.vertices]
        out = []
        for a in self.arrows:
            out.append((a,))
        for _ in range(length - 1):
            new = []
            for p in out:
                for a, (s, t) in self.arrows.items():
                    # prepend a: need source(a) == target(p)
                    if s == self.target(p):
                        new.append((a,) + p)
            out = new
        return out

    def source(self, p):
        if p[0] == "e":
            return p[1]
        return self.arrows[p[-1]][0]

    def target(self, p):
        if p[0] == "e":
            return p[1]
        return self.arrows[p[0]][1]

    def length(self, p) -> int:
        return 0 if p[0] == "e" else len(p)

    def concat(self, p, q):
        """p*q (q first), or None."""
        if self.source(p) != self.target(q):
            return None
        if p[0] == "e":
            return q
        if q[0] == "e":
            return p
        return p + q

    def label(self, p) -> str:
        return "e%s" % p[1] if p[0] == "e" else "*".join(p)

    def parse_path(self, s: str):
        s = str(s).strip()
        if s.startswith("e") and s[1:] in self.vertices and s not in self.arrows:
            return ("e", s[1:])
        parts = tuple(x.strip() for x in s.split("*"))
        for a in parts:
            if a not in self.arrows:
                raise KeyError("unknown arrow %r in path %r" % (a, s))
        for a, b in zip(parts, parts[1:]):
            if self.arrows[b][1] != self.arrows[a][0]:
                raise ValueError("path %r is not composable" % s)
        return parts


def path_algebra(F: Field, quiver: Quiver, relations, bound: int, name: str = "") -> Algebra:
    """kQ/I with I generated by ``relations``, assuming paths of length bound+1 lie in I.

    ``relations`` is a list of {path string: coeff}.  The ideal is computed
    linearly inside the span of paths of length <= bound+1; a surviving path
    of length bound+1 means the nilpotency bound is wrong and is rejected.
    """
    L = bound
    paths = []
    for n in range(L + 2):
        paths.extend(quiver.paths(n))
    # longest paths first so that pivots (and hence eliminations) prefer long paths
    paths.sort(key=lambda p: -quiver.length(p))
    col = {p: k for k, p in enumerate(paths)}
    rels = []
    for r in relations:
        v = {}
        for s, c in r.items():
            p = quiver.parse_path(s)
            v[p] = v.get(p, 0) + F(c)
        rels.append({p: c for p, c in v.items() if F.norm(c)})
    E = Echelon(F)
    for r in rels:
        for u in paths:
            for w in paths:
                vec = {}
                for p, c in r.items():
                    q = quiver.concat(u, p)
                    q = quiver.concat(q, w) if q is not None else None
                    if q is not None and quiver.length(q) <= L + 1:
                        vec[col[q]] = F.norm(vec.get(col[q], 0) + c)
                vec = {k: c for k, c in vec.items() if c}
                if vec:
                    E.insert(vec)
    for p in quiver.paths(L + 1):
        if not E.contains({col[p]: 1}):
            raise ValueError("nilpotency bound %d violated: path %s survives" % (L, quiver.label(p)))
    basis_paths = [p for p in sorted(paths, key=lambda p: (quiver.length(p), paths.index(p)))
                   if col[p] not in E.pivots and quiver.length(p) <= L]
    # keep a stable, readable order: by length then discovery order
    bidx = {p: k for k, p in enumerate(basis_paths)}

    def normal_form(vec: dict) -> dict:
        r = E.reduce(vec)[0]
        out = {}
        for k, c in r.items():
            p = paths[k]
            if p not in bidx:
                raise ValueError("reduction left a non-basis path %s" % quiver.label(p))
            out[bidx[p]] = c
        return out

    table = {}
    for i, p in enumerate(basis_paths):
        for j, q in enumerate(basis_paths):
            pq = quiver.concat(p, q)
            if pq is None or quiver.length(pq) > L + 1:
                continue
            v = normal_form({col[pq]: 1})
            if v:
                table[(i, j)] = v
    unit: dict = {}
    for v in quiver.vertices:
        nf = normal_form({col[("e", v)]: 1})
        axpy(F, unit, 1, nf)
    A = Algebra(F, [quiver.label(p) for p in basis_paths], table, unit, name=name)
    for v in quiver.vertices:
        A.idempotents["e%s" % v] = normal_form({col[("e", v)]: 1})
    A.quiver = quiver
    return A


# -- modules --------------------------------------------------------------------

class AlgModule:
    """A finite-dimensional module; ``act[k]`` is the matrix of the k-th basis element.

    Right modules: ``act[k]`` sends m to m*b_k.  Left modules: m to b_k*m.
    """

    def __init__(self, algebra: Algebra, dim: int, act, side: str = "right", name: str = "",
                 check: bool = True):
        self.algebra = algebra
        self.F = algebra.F
        self.dim = dim
        self.act = list(act)
        self.side = side
        self.name = name
        if check:
            rep = validate_module(self)
            if not rep.ok:
                raise ValidationError(rep)

    def action(self, m: dict, a: dict) -> dict:
        out: dict = {}
        for k, c in a.items():
            axpy(self.F, out, c, self.act[k].apply(m))
        return out


def validate_module(M: AlgModule) -> Report:
    A = M.algebra
    rep = Report("%s module %s" % (M.side, M.name))
    unit = Matrix.zero(M.F, M.dim, M.dim)
    for k, c in A.unit.items():
        unit = unit + M.act[k].scaled(c)
    rep.add("unit acts as identity", unit == Matrix.identity(M.F, M.dim))
    for i in range(A.dim):
        for j in range(A.dim):
            prod = Matrix.zero(M.F, M.dim, M.dim)
            for k, c in A.mul({i: 1}, {j: 1}).items():
                prod = prod + M.act[k].scaled(c)
            # right: m(b_i b_j) = (m b_i) b_j ; left: (b_i b_j) m = b_i (b_j m)
            expect = M.act[j] @ M.act[i] if M.side == "right" else M.act[i] @ M.act[j]
            if not rep.add("associativity", prod == expect, "(%s,%s)" % (A.basis[i], A.basis[j])) and True:
                return rep
    return rep


def regular_module(A: Algebra, side: str = "right") -> AlgModule:
    if side == "right":
        return AlgModule(A, A.dim, [A.right_mult({k: 1}) for k in range(A.dim)], "right", name="A_A")
    return AlgModule(A, A.dim, [A.left_mult({k: 1}) for k in range(A.dim)], "left", name="_AA")


def submodule(M: AlgModule, space: Subspace, name: str = "") -> AlgModule:
    """Restriction of M to an invariant subspace, in the subspace's echelon basis."""
    basis = space.basis
    act = []
    for k in range(M.algebra.dim):
        cols = []
        for b in basis:
            img = M.act[k].apply(b)
            if not space.contains(img):
                raise ValueError("subspace is not a submodule")
            cols.append({i: c for i, c in enumerate(space.coordinates(img)) if c})
        act.append(Matrix.from_columns(M.F, len(basis), cols))
    return AlgModule(M.algebra, len(basis), act, M.side, name=name)


def quotient_module(M: AlgModule, sub: Subspace, name: str = "") -> AlgModule:
    """M / sub with coordinates on the non-pivot columns of sub's echelon form."""
    piv = set(sub.pivots)
    free = [c for c in range(M.dim) if c not in piv]
    pos = {c: k for k, c in enumerate(free)}
    act = []
    for k in range(M.algebra.dim):
        cols = []
        for c in free:
            img = sub.reduce(M.act[k].apply({c: 1}))
            cols.append({pos[j]: a for j, a in img.items()})
        act.append(Matrix.from_columns(M.F, len(free), cols))
    return AlgModule(M.algebra, len(free), act, M.side, name=name)


def corner_module(A: Algebra, e: dict, side: str, name: str = "") -> AlgModule:
    """eA as a right module (side='right') or Ae as a left module (side='left')."""
    if side == "right":
        return submodule(regular_module(A, "right"), image_basis(A.left_mult(e)), name=name or "eA")
    return submodule(regular_module(A, "left"), image_basis(A.right_mult(e)), name=name or "Ae")


def corner_algebra(A: Algebra, e: dict, name: str = "eAe") -> tuple:
    """(eAe as an Algebra, list of its basis vectors inside A)."""
    S = A.corner(e, e)
    basis = S.basis
    table = {}
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            c = S.coordinates(A.mul(u, v))
            w = {k: a for k, a in enumerate(c) if a}
            if w:
                table[(i, j)] = w
    unit = {k: a for k, a in enumerate(S.coordinates(e)) if a}
    labels = [A.format(b) for b in basis]
    return Algebra(A.F, labels, table, unit, name=name), basis
