"""
Bounded cochain complexes of finite-dimensional vector spaces.

Differentials raise degree.  A complex is stored degreewise: ``dims[i]`` is
the dimension in degree i and ``d[i]`` the matrix of shape
``(dims[i+1], dims[i])``.  There is also a flat basis (degrees ascending,
then local index) used when complexes serve as Hom spaces of a category.
"""

from __future__ import annotations

from .linalg import (Field, Matrix, Subspace, QuotientSpace, axpy, kernel_basis,
                     image_basis, quotient_data, solve)
from .report import Report, ValidationError


class Complex:

    def __init__(self, F: Field, dims: dict, d: dict | None = None, check: bool = True):
        self.F = F
        self.dims = {int(i): int(n) for i, n in dims.items() if n}
        d = dict(d or {})
        self.d = {}
        for i, n in self.dims.items():
            m = self.dims.get(i + 1, 0)
            if not m:
                continue
            mat = d.pop(i, None)
            if mat is None:
                mat = Matrix.zero(F, m, n)
            if mat.shape != (m, n):
                raise ValueError("differential in degree %d has shape %s, expected %s"
                                 % (i, mat.shape, (m, n)))
            self.d[i] = mat
        for i, mat in d.items():
            if not mat.is_zero():
                raise ValueError("nonzero differential out of degree %d where a component vanishes" % i)
        self.degrees = []
        self.offset = {}
        for i in sorted(self.dims):
            self.offset[i] = len(self.degrees)
            self.degrees.extend([i] * self.dims[i])
        if check:
            rep = validate(self)
            if not rep.ok:
                raise ValidationError(rep)

    # -- shape --------------------------------------------------------------

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    @property
    def components(self) -> dict:
        return dict(self.dims)

    @property
    def support(self):
        return sorted(self.dims)

    @property
    def total_dim(self) -> int:
        return len(self.degrees)

    def differential(self, i: int) -> Matrix:
        mat = self.d.get(i)
        if mat is None:
            return Matrix.zero(self.F, self.dim(i + 1), self.dim(i))
        return mat

    def is_zero(self) -> bool:
        return not self.dims

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * n for i, n in self.dims.items())

    # -- flat basis -----------------------------------------------------------

    def flat(self, i: int, local: int) -> int:
        return self.offset[i] + local

    def local(self, flat: int):
        i = self.degrees[flat]
        return i, flat - self.offset[i]

    def slice(self, v: dict, i: int) -> dict:
        """Degree-i part of a flat vector, in local coordinates."""
        off = self.offset.get(i)
        if off is None:
            return {}
        n = self.dims[i]
        return {j - off: a for j, a in v.items() if off <= j < off + n}

    def embed(self, v: dict, i: int) -> dict:
        off = self.offset.get(i)
        if off is None:
            if v:
                raise ValueError("no component in degree %d" % i)
            return {}
        return {off + j: a for j, a in v.items()}

    def dflat(self, v: dict) -> dict:
        out: dict = {}
        for i in {self.degrees[j] for j in v}:
            if i in self.d:
                axpy(self.F, out, 1, self.embed(self.d[i].apply(self.slice(v, i)), i + 1))
        return out

    def degree_of(self, v: dict):
        degs = {self.degrees[j] for j in v}
        if len(degs) > 1:
            raise ValueError("inhomogeneous vector")
        return degs.pop() if degs else None

    def __eq__(self, other):
        return (isinstance(other, Complex) and self.F == other.F and self.dims == other.dims
                and all(self.differential(i) == other.differential(i) for i in self.dims))

    def __repr__(self):
        return "Complex(%s, %s)" % (self.F, {i: self.dims[i] for i in sorted(self.dims)})


def zero_complex(F: Field) -> Complex:
    return Complex(F, {})


def stalk(F: Field, degree: int, dim: int = 1) -> Complex:
    return Complex(F, {degree: dim})


def from_dense(F: Field, dims: dict, d: dict, check: bool = True) -> Complex:
    return Complex(F, dims, {i: Matrix.from_dense(F, m, cols=dims.get(i, 0)) for i, m in d.items()},
                   check=check)


def validate(c: Complex) -> Report:
    """Check d^{i+1} d^i = 0 in every degree."""
    rep = Report("complex")
    for i in sorted(c.d):
        if i + 1 in c.d:
            ok = (c.d[i + 1] @ c.d[i]).is_zero()
            if not rep.add("d^2=0 at degree %d" % i, ok):
                break
    return rep


def cohomology(c: Complex, i: int):
    """``(dim H^i, representative cocycles)`` as local vectors in degree i."""
    n = c.dim(i)
    if not n:
        return 0, []
    Z = kernel_basis(c.differential(i))
    B = image_basis(c.differential(i - 1)) if c.dim(i - 1) else Subspace(c.F, n)
    return quotient_data(Z, B)


def cohomology_dims(c: Complex) -> dict:
    out = {}
    for i in c.support:
        h = cohomology(c, i)[0]
        if h:
            out[i] = h
    return out


def cohomology_space(c: Complex, i: int) -> QuotientSpace:
    """Coordinates on H^i: cocycles modulo coboundaries, in local degree-i vectors."""
    _, reps = cohomology(c, i)
    B = image_basis(c.differential(i - 1)).basis if c.dim(i - 1) else []
    return QuotientSpace(c.F, B, reps)


def is_acyclic(c: Complex) -> bool:
    return all(cohomology(c, i)[0] == 0 for i in c.support)


def shift(c: Complex, k: int) -> Complex:
    """Sigma^k: components move down by k, differential scaled by (-1)^k."""
    sign = -1 if k % 2 else 1
    return Complex(c.F, {i - k: n for i, n in c.dims.items()},
                   {i - k: m.scaled(sign) for i, m in c.d.items()}, check=False)


def suspend(c: Complex) -> Complex:
    return shift(c, 1)


def desuspend(c: Complex) -> Complex:
    return shift(c, -1)


class ChainMap:
    """A homogeneous map of degree ``degree``; ``components[n]`` maps source^n -> target^{n+degree}."""

    def __init__(self, source: Complex, target: Complex, degree: int, components: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        F = source.F
        comps = {}
        for n, mat in (components or {}).items():
            if mat.shape != (target.dim(n + degree), source.dim(n)):
                raise ValueError("component %d has shape %s, expected %s"
                                 % (n, mat.shape, (target.dim(n + degree), source.dim(n))))
            if not mat.is_zero():
                comps[n] = mat
        self.components = comps
        self.F = F

    def component(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zero(self.F, self.target.dim(n + self.degree), self.source.dim(n))
        return m

    def boundary(self) -> "ChainMap":
        """d(f) = d_W f - (-1)^p f d_V, a map of degree p+1."""
        p = self.degree
        sign = -1 if p % 2 else 1
        comps = {}
        for n in self.source.support:
            m = self.target.differential(n + p) @ self.component(n)
            m = m - (self.component(n + 1) @ self.source.differential(n)).scaled(sign)
            comps[n] = m
        return ChainMap(self.source, self.target, p + 1, comps)

    def is_closed(self) -> bool:
        return not self.boundary().components

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for n in other.source.support:
            comps[n] = self.component(n + other.degree) @ other.component(n)
        return ChainMap(other.source, self.target, self.degree + other.degree, comps)

    def __add__(self, other):
        return ChainMap(self.source, self.target, self.degree,
                        {n: self.component(n) + other.component(n) for n in self.source.support})

    def __sub__(self, other):
        return ChainMap(self.source, self.target, self.degree,
                        {n: self.component(n) - other.component(n) for n in self.source.support})

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.degree == other.degree
                and all(self.component(n) == other.component(n) for n in self.source.support))

    def is_zero(self) -> bool:
        return not self.components


def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, 0, {n: Matrix.identity(c.F, c.dim(n)) for n in c.support})


def zero_map(source: Complex, target: Complex, degree: int = 0) -> ChainMap:
    return ChainMap(source, target, degree)


def cone(f: ChainMap) -> Complex:
    """Cone(f) = target + Sigma(source), differential [[d_T, f], [0, -d_S]]."""
    if f.degree != 0:
        raise ValueError("cone needs a degree-0 map, got degree %d" % f.degree)
    if not f.is_closed():
        raise ValueError("cone needs a closed map")
    S, T, F = f.source, f.target, f.F
    degs = set(T.support) | {i - 1 for i in S.support}
    dims = {n: T.dim(n) + S.dim(n + 1) for n in degs}
    d = {}
    for n in degs:
        rows, cols = dims.get(n + 1, 0), dims[n]
        if not rows:
            continue
        tn, tn1 = T.dim(n), T.dim(n + 1)
        data = [{} for _ in range(rows)]
        dT = T.differential(n)
        for r, row in enumerate(dT.data):
            data[r].update(row)
        fm = f.component(n + 1)  # S^{n+1} -> T^{n+1}
        for r, row in enumerate(fm.data):
            for j, a in row.items():
                data[r][tn + j] = a
        dS = S.differential(n + 1)
        for r, row in enumerate(dS.data):
            for j, a in row.items():
                data[tn1 + r][tn + j] = F.norm(-a)
        d[n] = Matrix(F, rows, cols, data)
    return Complex(F, dims, d)


class HomComplex(Complex):
    """Hom(V, W) with the standard basis of elementary matrices.

    The degree-p basis enumerates blocks (n, row, col) for maps V^n -> W^{n+p}.
    """

    def __init__(self, v: Complex, w: Complex):
        F = v.F
        self.F = F
        self.source, self.target = v, w
        self.blocks = {}
        dims = {}
        for p in {j - i for i in v.support for j in w.support}:
            off = 0
            blocks = []
            for n in v.support:
                m = w.dim(n + p)
                if m:
                    blocks.append((n, off, m, v.dim(n)))
                    off += m * v.dim(n)
            if off:
                dims[p] = off
                self.blocks[p] = blocks
        d = {}
        for p in dims:
            if p + 1 not in dims:
                continue
            cols = []
            for k in range(dims[p]):
                f = self.to_map(p, {k: 1})
                cols.append(self.from_map(f.boundary()))
            d[p] = Matrix.from_columns(F, dims[p + 1], cols)
        super().__init__(F, dims, d)

    def to_map(self, p: int, vec: dict) -> ChainMap:
        """Local degree-p vector -> ChainMap of degree p."""
        comps = {}
        for n, off, m, k in self.blocks.get(p, []):
            data = [{} for _ in range(m)]
            for idx, a in vec.items():
                if off <= idx < off + m * k:
                    r, c = divmod(idx - off, k)
                    data[r][c] = a
            comps[n] = Matrix(self.F, m, k, data)
        return ChainMap(self.source, self.target, p, comps)

    def from_map(self, f: ChainMap) -> dict:
        vec = {}
        for n, off, m, k in self.blocks.get(f.degree, []):
            for r, row in enumerate(f.component(n).data):
                for c, a in row.items():
                    vec[off + r * k + c] = a
        return vec


def hom_complex(v: Complex, w: Complex) -> HomComplex:
    return HomComplex(v, w)


def is_null_homotopic(f: ChainMap):
    """A homotopy h with d(h) = f, or None."""
    if not f.is_closed():
        raise ValueError("null-homotopy test needs a closed map")
    H = hom_complex(f.source, f.target)
    p = f.degree
    target = H.from_map(f)
    if not target:
        return ChainMap(f.source, f.target, p - 1)
    if not H.dim(p - 1):
        return None
    x = solve(H.differential(p - 1), target)
    if x is None:
        return None
    return H.to_map(p - 1, x)


def is_contractible(c: Complex) -> bool:
    return is_null_homotopic(identity_map(c)) is not None


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f))


def build_complex(F: Field, degrees, boundary, check: bool = True):
    """Complex on an arbitrary graded basis.

    ``degrees[k]`` is the degree of basis key k and ``boundary(k)`` returns
    d(key k) as a dict over key indices.  Returns ``(complex, pos)`` where
    ``pos[k]`` is the flat index of key k.
    """
    degrees = list(degrees)
    order = sorted(range(len(degrees)), key=lambda k: degrees[k])
    pos = [0] * len(degrees)
    for flat, k in enumerate(order):
        pos[k] = flat
    dims: dict = {}
    for g in degrees:
        dims[g] = dims.get(g, 0) + 1
    c = Complex(F, dims, check=False)
    cols: dict = {}
    for k in order:
        g = degrees[k]
        if g + 1 not in dims:
            continue
        img = {}
        for k2, a in boundary(k).items():
            if degrees[k2] != g + 1:
                raise ValueError("boundary of a degree-%d element has a degree-%d term" % (g, degrees[k2]))
            a = F.norm(a)
            if a:
                img[pos[k2] - c.offset[g + 1]] = a
        cols.setdefault(g, []).append(img)
    d = {g: Matrix.from_columns(F, dims[g + 1], cl) for g, cl in cols.items()}
    return Complex(F, dims, d, check=check), pos


class Subcomplex:
    """A subcomplex cut out degreewise by subspaces of an ambient complex.

    ``basis[p]`` lists the ambient (local, degree p) vectors spanning the
    degree-p part; ``complex`` carries the induced differential.
    """

    def __init__(self, ambient: Complex, spaces: dict):
        self.ambient = ambient
        self.spaces = {p: S for p, S in spaces.items() if S.dim}
        self.basis = {p: S.basis for p, S in self.spaces.items()}
        F = ambient.F
        dims = {p: S.dim for p, S in self.spaces.items()}
        d = {}
        for p, S in self.spaces.items():
            if p + 1 not in self.spaces:
                for b in S.basis:
                    if ambient.differential(p).apply(b):
                        raise ValueError("subspace in degree %d is not closed under d" % p)
                continue
            T = self.spaces[p + 1]
            cols = []
            for b in S.basis:
                img = ambient.differential(p).apply(b)
                if not T.contains(img):
                    raise ValueError("subspace in degree %d is not closed under d" % p)
                cols.append({k: a for k, a in enumerate(T.coordinates(img)) if a})
            d[p] = Matrix.from_columns(F, T.dim, cols)
        self.complex = Complex(F, dims, d)

    def to_ambient(self, p: int, coords: dict) -> dict:
        out: dict = {}
        for k, a in coords.items():
            axpy(self.ambient.F, out, a, self.basis[p][k])
        return out

    def coords(self, p: int, v: dict):
        S = self.spaces.get(p)
        if S is None:
            if v:
                raise ValueError("vector outside the subcomplex")
            return {}
        return {k: a for k, a in enumerate(S.coordinates(v)) if a}


class QuotientComplex:
    """ambient / sub, with coordinates on the non-pivot columns of sub's echelon basis."""

    def __init__(self, ambient: Complex, spaces: dict):
        F = ambient.F
        self.ambient = ambient
        self.spaces = spaces
        self.free = {}
        self.pos = {}
        dims = {}
        for p in ambient.support:
            S = spaces.get(p)
            piv = set(S.pivots) if S is not None else set()
            free = [c for c in range(ambient.dim(p)) if c not in piv]
            if free:
                self.free[p] = free
                self.pos[p] = {c: k for k, c in enumerate(free)}
                dims[p] = len(free)
        for p, S in spaces.items():
            for b in S.basis:
                img = ambient.differential(p).apply(b)
                T = spaces.get(p + 1)
                if img and (T is None or not T.contains(img)):
                    raise ValueError("relations in degree %d are not closed under d" % p)
        d = {}
        for p in dims:
            if p + 1 not in dims:
                continue
            cols = [self.project(p + 1, ambient.differential(p).apply({c: 1})) for c in self.free[p]]
            d[p] = Matrix.from_columns(F, dims[p + 1], cols)
        self.complex = Complex(F, dims, d)

    def project(self, p: int, v: dict) -> dict:
        S = self.spaces.get(p)
        r = S.reduce(v) if S is not None else v
        pos = self.pos.get(p, {})
        return {pos[c]: a for c, a in r.items()}

    def lift(self, p: int, coords: dict) -> dict:
        return {self.free[p][k]: a for k, a in coords.items()}
